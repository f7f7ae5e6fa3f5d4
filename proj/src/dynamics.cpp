#include "conegeo/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "conegeo/sym_layout.hpp"

namespace conegeo {

namespace {

constexpr double kBoundaryGap = 1e-6;
constexpr double kVanish = 1e-6;

Vector unit_scaled(const Cone& cone, const Vector& x) {
  const double s = order_unit_norm(cone, x);
  return s > 0.0 ? Vector(x / s) : x;
}

struct Stepper {
  const Map& f;
  OrbitMode mode;
  const Map* inner = nullptr;
  GaugeSpec gauge;

  Stepper(const Map& map, OrbitMode m) : f(map), mode(m) {
    if (mode == OrbitMode::Hilbert) {
      const auto* n = std::get_if<NormalizedMap>(&f.data());
      if (!n) throw DomainError("Hilbert-mode orbits need a normalized map");
      inner = n->inner.get();
      gauge = n->gauge;
    }
  }

  // One step from the normalized point p; returns the log of the new gauge.
  double advance(Vector& p) const {
    const Cone& cone = f.cone();
    if (mode == OrbitMode::Thompson) {
      p = f.apply_extended(p);
      const double s = order_unit_norm(cone, p);
      if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("gauge collapsed");
      p /= s;
      return std::log(s);
    }
    p = inner->apply_extended(p);
    const double q = gauge(cone, p);
    if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("gauge collapsed");
    p /= q;
    return std::log(q);
  }
};

void record_horo(const std::vector<Horofunction>& horo, OrbitMode mode,
                 OrbitStep& st) {
  // In Thompson mode the iterate is exp(L) * point: the reverse Funk kind
  // shifts by -L, the Funk kind by +L, the Hilbert kind is invariant.
  const double shift = mode == OrbitMode::Thompson ? st.log_gauge : 0.0;
  for (const Horofunction& h : horo) {
    const double v = h(st.point);
    switch (h.kind()) {
      case HoroKind::RFunk:
        st.h_r = v - shift;
        break;
      case HoroKind::FunkSym:
        st.h_f = v + shift;
        break;
      case HoroKind::HilbertSym:
        st.h_h = v;
        break;
    }
  }
}

}  // namespace

const char* to_string(OrbitMode mode) {
  return mode == OrbitMode::Thompson ? "thompson" : "hilbert";
}

OrbitMode orbit_mode_from_string(const std::string& s) {
  if (s == "thompson") return OrbitMode::Thompson;
  if (s == "hilbert") return OrbitMode::Hilbert;
  throw Error("unknown orbit mode '" + s + "'");
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Bounded:
      return "bounded";
    case Regime::Unbounded:
      return "unbounded";
    case Regime::Undetermined:
      return "undetermined";
  }
  return "?";
}

OrbitTrace iterate_orbit(const Map& f, const Vector& x0, int k_max, OrbitMode mode,
                         const OrbitOptions& opts) {
  const Cone& cone = f.cone();
  cone.check_dim(x0, "x0");
  if (!is_interior(cone, x0)) throw DomainError("orbit start must be interior");
  if (k_max < 0) throw DomainError("k_max must be nonnegative");
  if (opts.stride < 1) throw DomainError("stride must be positive");
  for (const Horofunction& h : opts.horo) {
    if (!(h.cone() == cone)) throw DomainError("horofunction lives on a different cone");
  }

  const Stepper stepper(f, mode);
  OrbitTrace tr;
  tr.mode = mode;
  tr.cone = cone;
  tr.k_max = k_max;
  tr.stride = opts.stride;

  Vector p;
  double log_gauge = 0.0;
  if (mode == OrbitMode::Thompson) {
    const double s = order_unit_norm(cone, x0);
    p = x0 / s;
    log_gauge = std::log(s);
  } else {
    const double q = stepper.gauge(cone, x0);
    p = x0 / q;
  }

  auto make_step = [&](int k, const Vector* prev, double prev_log) {
    OrbitStep st;
    st.k = k;
    st.point = p;
    st.log_gauge = log_gauge;
    st.interior_gap = interior_gap(cone, p);
    const bool interior = is_interior(cone, p);
    if (prev && interior && is_interior(cone, *prev)) {
      const double a = funk(cone, *prev, p), b = funk(cone, p, *prev);
      const double dl = log_gauge - prev_log;
      st.hilbert_step = a + b;
      st.thompson_step = std::max(a - dl, b + dl);
    }
    if (interior) record_horo(opts.horo, mode, st);
    tr.steps.push_back(std::move(st));
  };

  make_step(0, nullptr, 0.0);
  Vector prev;
  for (int k = 1; k <= k_max; ++k) {
    const bool record = k % opts.stride == 0 || k == k_max;
    const double prev_log = log_gauge;
    if (record) prev = p;
    try {
      log_gauge += stepper.advance(p);
    } catch (const DomainError& e) {
      tr.truncated = true;
      tr.truncation_reason = e.what();
      break;
    }
    if (!in_cone(cone, p)) {
      tr.truncated = true;
      tr.truncation_reason = "iterate left the cone";
      break;
    }
    if (record) make_step(k, &prev, prev_log);
  }
  return tr;
}

std::optional<DualFunctional> fit_separating_functional(
    const Cone& cone, const std::vector<Vector>& points) {
  if (points.empty()) return std::nullopt;
  const int d = cone.ambient_dim();
  Vector phi = Vector::Zero(d);
  switch (cone.kind()) {
    case ConeKind::Orthant:
    case ConeKind::Polyhedral: {
      const Matrix& fac = cone.facets();
      for (Eigen::Index i = 0; i < fac.rows(); ++i) {
        bool vanishes = true;
        for (const Vector& xi : points) {
          if (std::abs(fac.row(i).dot(xi)) > kVanish * order_unit_norm(cone, xi)) {
            vanishes = false;
            break;
          }
        }
        if (vanishes) phi += fac.row(i).transpose();
      }
      break;
    }
    case ConeKind::Psd: {
      const int n = cone.n();
      Matrix s = Matrix::Zero(n, n);
      for (const Vector& xi : points) s += sym::unpack(unit_scaled(cone, xi), n);
      Eigen::SelfAdjointEigenSolver<Matrix> es(s);
      const double top = es.eigenvalues()(n - 1);
      Matrix proj = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        if (es.eigenvalues()(i) <= kVanish * top) {
          proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
        }
      }
      phi = sym::pack(proj);
      break;
    }
    case ConeKind::Lorentz: {
      for (const Vector& xi : points) {
        Vector t = xi;
        t.tail(d - 1) = -t.tail(d - 1);
        phi += t / xi.norm();
      }
      break;
    }
  }
  const double pn = phi.norm();
  if (!(pn > 0.0)) return std::nullopt;
  for (const Vector& xi : points) {
    if (std::abs(phi.dot(xi)) > kVanish * pn * xi.norm()) return std::nullopt;
  }
  if (!(phi.dot(cone.unit()) > 0.0)) return std::nullopt;
  return DualFunctional{phi};
}

bool hull_in_boundary(const Cone& cone, const std::vector<Vector>& points,
                      std::uint64_t seed) {
  if (points.empty()) return false;
  std::vector<Vector> pts;
  for (const Vector& p : points) pts.push_back(unit_scaled(cone, p));
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (int t = 0; t < 1000; ++t) {
    Vector c = Vector::Zero(pts.front().size());
    double total = 0.0;
    for (const Vector& p : pts) {
      const double w = expo(rng);
      c += w * p;
      total += w;
    }
    c /= total;
    if (relative_gap(cone, c) > kBoundaryGap) return false;
  }
  return true;
}

OmegaReport omega_limit(const OrbitTrace& trace, double tail_fraction,
                        double cluster_radius) {
  const Cone& cone = trace.cone;
  const int n = static_cast<int>(trace.steps.size());
  if (n < 10) throw DomainError("omega_limit needs at least ten recorded points");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw DomainError("tail_fraction must lie in (0, 1]");
  }
  OmegaReport rep;
  rep.mode = trace.mode;
  rep.interior_witness = cone.unit();

  const int tail = std::max(1, static_cast<int>(std::ceil(tail_fraction * n)));
  std::vector<Vector> scaled(n);
  for (int i = n - tail; i < n; ++i) scaled[i] = unit_scaled(cone, trace.steps[i].point);
  for (int i = n - 1; i >= n - tail; --i) {
    bool placed = false;
    for (Cluster& c : rep.clusters) {
      const double d = order_unit_norm(cone, scaled[i] - c.representative);
      if (d <= cluster_radius) {
        c.members.push_back(i);
        c.radius = std::max(c.radius, d);
        placed = true;
        break;
      }
    }
    if (!placed) rep.clusters.push_back({scaled[i], {i}, 0.0});
  }

  std::vector<Vector> reps;
  rep.all_boundary = true;
  for (const Cluster& c : rep.clusters) {
    reps.push_back(c.representative);
    if (relative_gap(cone, c.representative) > kBoundaryGap) rep.all_boundary = false;
  }
  if (!rep.all_boundary) {
    rep.note = "limit points reach the interior";
    return rep;
  }
  rep.separating_functional = fit_separating_functional(cone, reps);
  if (!rep.separating_functional) rep.note = "no separating functional found";
  rep.hull_in_boundary = hull_in_boundary(cone, reps);
  return rep;
}

RegimeInfo classify_regime(const OrbitTrace& trace) {
  RegimeInfo info;
  const auto& st = trace.steps;
  if (st.size() < 8) return info;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const OrbitStep& s : st) {
    lo = std::min(lo, s.log_gauge);
    hi = std::max(hi, s.log_gauge);
  }
  info.span = hi - lo;

  // Log-gauge at the last recorded k not exceeding the target.
  auto at = [&](int target) {
    auto it = std::upper_bound(st.begin(), st.end(), target,
                               [](int t, const OrbitStep& s) { return t < s.k; });
    return it == st.begin() ? st.front().log_gauge : std::prev(it)->log_gauge;
  };
  const int kk = st.back().k;
  const double g1 = at(kk), g2 = at(kk / 2), g4 = at(kk / 4), g8 = at(kk / 8);
  info.d1 = g1 - g2;
  info.d2 = g2 - g4;
  info.d3 = g4 - g8;

  const bool steady_growth = info.d1 > 1e-3 && info.d2 > 1e-3 && info.d3 > 1e-3 &&
                             info.d1 >= 0.75 * info.d2 && info.d2 >= 0.75 * info.d3;
  if (info.span > 20.0 || steady_growth) {
    info.regime = Regime::Unbounded;
    return info;
  }
  const std::size_t half = st.size() / 2;
  double first_max = -std::numeric_limits<double>::infinity(), second_max = first_max;
  for (std::size_t i = 0; i < st.size(); ++i) {
    (i < half ? first_max : second_max) =
        std::max(i < half ? first_max : second_max, st[i].log_gauge);
  }
  const bool no_new_highs =
      second_max <= first_max + 1e-9 * std::max(1.0, std::abs(first_max));
  const bool decaying = info.d2 > 0.0 && info.d1 <= 0.6 * info.d2;
  if (no_new_highs || std::abs(info.d1) <= 1e-3 || decaying) {
    info.regime = Regime::Bounded;
  }
  return info;
}

DwReport denjoy_wolff_report(const Map& f, const GaugeSpec& gauge,
                             const std::vector<Vector>& starts,
                             const DwOptions& opts) {
  const Cone& cone = f.cone();
  if (starts.empty()) throw DomainError("at least one start point is required");
  for (const Vector& x : starts) {
    cone.check_dim(x, "start");
    if (!is_interior(cone, x)) throw DomainError("start points must be interior");
  }
  DwReport rep;
  rep.spectral = spectral_radius(f, cone.unit(), opts.spectral);
  if (rep.spectral.interior_eigenvector_found) {
    rep.message = "has interior eigenvector - DW hypotheses unmet";
    return rep;
  }
  rep.hypotheses_met = true;
  const Map g = f.scaled(1.0 / rep.spectral.r_hat);
  const Map gn = Map::normalized(g, gauge);

  std::vector<std::future<StartReport>> jobs;
  for (const Vector& x0 : starts) {
    jobs.push_back(std::async(std::launch::async, [&, x0] {
      OrbitOptions oo;
      oo.stride = opts.stride;
      StartReport sr;
      sr.x0 = x0;
      const OrbitTrace tt = iterate_orbit(g, x0, opts.k_max, OrbitMode::Thompson, oo);
      const OrbitTrace th = iterate_orbit(gn, x0, opts.k_max, OrbitMode::Hilbert, oo);
      sr.truncated = tt.truncated || th.truncated;
      sr.thompson = omega_limit(tt, opts.tail_fraction, opts.cluster_radius);
      sr.hilbert = omega_limit(th, opts.tail_fraction, opts.cluster_radius);
      sr.regime = classify_regime(tt);
      return sr;
    }));
  }
  for (auto& j : jobs) rep.starts.push_back(j.get());

  std::vector<Vector> reps;
  rep.all_boundary = true;
  for (const StartReport& sr : rep.starts) {
    for (const OmegaReport* om : {&sr.thompson, &sr.hilbert}) {
      rep.all_boundary = rep.all_boundary && om->all_boundary;
      for (const Cluster& c : om->clusters) reps.push_back(c.representative);
    }
  }
  if (rep.all_boundary) {
    rep.common_functional = fit_separating_functional(cone, reps);
    rep.hull_in_boundary = hull_in_boundary(cone, reps);
  }
  rep.message = rep.common_functional ? "common separating functional found"
                                      : "no common separating functional";
  return rep;
}

DichotomyReport polyhedral_dichotomy_check(const Map& f, const Vector& x0, int k_max,
                                           int stride) {
  const Cone& cone = f.cone();
  DichotomyReport rep;
  rep.polyhedral =
      cone.kind() == ConeKind::Orthant || cone.kind() == ConeKind::Polyhedral;
  OrbitOptions oo;
  oo.stride = stride;
  const OrbitTrace tr = iterate_orbit(f, x0, k_max, OrbitMode::Thompson, oo);
  rep.regime = classify_regime(tr);

  const auto& st = tr.steps;
  const std::size_t n = st.size();
  const std::size_t early = std::max<std::size_t>(1, n / 10);
  double ref = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < early; ++i) ref = std::max(ref, st[i].log_gauge);

  std::vector<Vector> low;
  for (std::size_t i = n / 2; i < n; ++i) {
    if (st[i].log_gauge <= ref) low.push_back(std::exp(st[i].log_gauge) * st[i].point);
  }
  rep.bounded_tail_points = static_cast<int>(low.size());
  if (low.size() >= 10) {
    const Vector& center = low.back();
    int near = 0;
    for (const Vector& p : low) {
      if (order_unit_norm(cone, p - center) <= 1e-6) ++near;
    }
    if (near >= 10 && relative_gap(cone, center) <= kBoundaryGap) {
      rep.bounded_accumulation = true;
      rep.accumulation_point = center;
    }
  }
  rep.violation = rep.regime.regime == Regime::Unbounded && rep.bounded_accumulation;
  return rep;
}

}  // namespace conegeo
