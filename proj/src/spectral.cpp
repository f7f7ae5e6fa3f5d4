#include "conegeo/spectral.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "conegeo/metrics.hpp"

namespace conegeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this a Hilbert step is dominated by rounding in the coordinates.
constexpr double kStepFloor = 64 * DBL_EPSILON;

double gauge(const Cone& cone, const Vector& x, const Vector& u) {
  return order_unit_norm(cone, x, u);
}

// Hilbert distance between two interior points, with shortcuts for the
// orthant and the symmetric cones since it sits inside the hot iteration.
double hilbert_step(const Cone& cone, const Vector& a, const Vector& b) {
  if (cone.kind() == ConeKind::Orthant) {
    double hi = -kInf, lo = kInf;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double r = a(i) / b(i);
      hi = std::max(hi, r);
      lo = std::min(lo, r);
    }
    if (!(lo > 0.0)) return kInf;
    return std::log(hi / lo);
  }
  if (cone.kind() == ConeKind::Polyhedral) return hilbert(cone, a, b);
  // log(lambda_max / lambda_min) of P(b^{-1/2}) a, one decomposition each.
  const jordan::Element z = jordan::quadratic_apply(
      jordan::power(cone.element(b), -0.5), cone.element(a));
  const auto [lo, hi] = jordan::spectral_bounds(z);
  if (!(lo > 0.0)) return kInf;
  return std::log(hi / lo);
}

void require_interior(const Cone& cone, const Vector& y, const char* what) {
  cone.check_dim(y, what);
  if (!is_interior(cone, y)) {
    throw DomainError(std::string(what) + " must lie in the cone interior");
  }
}

// f^k(x) kept gauge-normalized; returns the accumulated log of the gauges.
double normalized_orbit(const Map& f, Vector& x, const Vector& u, int k) {
  const Cone& cone = f.cone();
  double log_scale = 0.0;
  for (int i = 0; i < k; ++i) {
    x = f.apply_extended(x);
    const double s = gauge(cone, x, u);
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw DomainError("iterate collapsed to zero or overflowed");
    }
    x /= s;
    if (!in_cone(cone, x)) throw DomainError("iterate left the cone");
    log_scale += std::log(s);
  }
  return log_scale;
}

// Drops the spectral components of v that are negligible against the top
// one, producing the nearby boundary point a drifting eigenvector tends to.
std::optional<Vector> boundary_candidate(const Cone& cone, const Vector& v) {
  if (!cone.algebra()) return std::nullopt;
  const jordan::SpectralDecomposition sd =
      jordan::spectral_decomposition(cone.element(v));
  const double top = sd.eigenvalues.back();
  if (!(top > 0.0)) return std::nullopt;
  Vector w = Vector::Zero(v.size());
  bool dropped = false;
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    if (sd.eigenvalues[i] <= 1e-3 * top) {
      dropped = true;
      continue;
    }
    w += sd.eigenvalues[i] * sd.frame[i].coords;
  }
  if (!dropped) return std::nullopt;
  return w;
}

}  // namespace

double power_radius(const Map& f, const Vector& u, int k_max) {
  const Cone& cone = f.cone();
  require_interior(cone, u, "u");
  if (k_max < 1) throw DomainError("k_max must be positive");
  Vector x = u;
  double log_scale = 0.0;
  double best = kInf;
  for (int k = 1; k <= k_max; ++k) {
    log_scale += normalized_orbit(f, x, u, 1);
    const double val = (log_scale + std::log(m_ratio_value(cone, x, u))) / k;
    best = std::min(best, val);
  }
  return std::exp(best);
}

EigenSolveResult approx_eigenpair(const Map& f, double eps, const Vector& u,
                                  double tol, int max_iter,
                                  const Vector* start) {
  const Cone& cone = f.cone();
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  require_interior(cone, u, "u");

  Vector x = (start && start->size() == u.size() && is_interior(cone, *start))
                 ? *start
                 : u;
  x /= gauge(cone, x, u);

  EigenSolveResult res;
  res.eps = eps;
  std::vector<double> steps;
  steps.reserve(static_cast<std::size_t>(std::min(max_iter, 1 << 16)));
  Vector y(x.size());
  const double ratio_floor = std::max(tol, 1e-13);

  for (int n = 1; n <= max_iter; ++n) {
    y = f.apply_extended(x);
    y += eps * u;  // ||x||_u = 1
    const double q = gauge(cone, y, u);
    if (!(q > 0.0) || !std::isfinite(q)) {
      throw DomainError("perturbed iterate has invalid gauge");
    }
    y /= q;
    const double s = hilbert_step(cone, y, x);
    if (!steps.empty() && steps.back() >= ratio_floor) {
      res.measured_contraction =
          std::max(res.measured_contraction, s / steps.back());
    }
    steps.push_back(s);
    x.swap(y);
    res.iterations = n;

    if (s == 0.0) {
      res.converged = true;
      break;
    }
    // Contraction rate from a short and a long window (the long one keeps
    // the estimate stable once steps are quantized near rounding level). The
    // distance to the fixed point is at most s * c / (1 - c).
    auto rate = [&](int w) {
      const double prev = steps[steps.size() - 1 - w];
      return prev > 0.0 ? std::pow(s / prev, 1.0 / w) : 0.0;
    };
    if (n >= 2 && s < tol) {
      double c = std::max(rate(std::min(n - 1, 10)), rate(n / 2));
      c = std::min(c, 1.0 - 1e-15);
      if (s * c / (1.0 - c) < tol) {
        res.converged = true;
        break;
      }
    }
    // Give up once the observed rate cannot meet tol within the budget.
    if (n >= 200 && n % 50 == 0) {
      const double c = rate(n / 2);
      if (c >= 1.0) {
        if (s <= kStepFloor) {
          res.converged = true;  // no further progress is resolvable
          break;
        }
        if (n >= 2000) break;
      } else if (c > 0.0) {
        const double target = tol * (1.0 - c);
        const double need = s > target ? std::log(target / s) / std::log(c) : 0.0;
        if (n + need > static_cast<double>(max_iter)) break;
      }
    }
  }

  y = f.apply_extended(x);
  y += eps * u;
  res.v_eps = x;
  res.r_eps = gauge(cone, y, u);
  return res;
}

SpectralReport spectral_radius(const Map& f, const Vector& u,
                               const SpectralOptions& opts) {
  const Cone& cone = f.cone();
  if (!(opts.eps0 > 0.0)) throw DomainError("eps0 must be positive");
  if (!(opts.decay > 0.0 && opts.decay < 1.0)) {
    throw DomainError("decay must lie in (0, 1)");
  }
  require_interior(cone, u, "u");

  SpectralReport rep;
  Vector warm;
  for (int j = 0; j <= opts.max_steps; ++j) {
    const double eps = opts.eps0 * std::pow(opts.decay, j);
    EigenSolveResult res = approx_eigenpair(f, eps, u, opts.tol, opts.max_iter,
                                            j > 0 ? &warm : nullptr);
    if (!res.converged) {
      if (rep.eps_trace.empty()) {
        throw ConvergenceError("eigenvector iteration did not converge at eps = " +
                               std::to_string(eps));
      }
      rep.truncated = true;
      break;
    }
    warm = res.v_eps;
    rep.eps_trace.push_back(std::move(res));
    const std::size_t m = rep.eps_trace.size();
    if (m >= 2 && std::abs(rep.eps_trace[m - 1].r_eps -
                           rep.eps_trace[m - 2].r_eps) < opts.tol) {
      break;
    }
  }

  const auto& tr = rep.eps_trace;
  const std::size_t m = tr.size();
  rep.r_hat = tr.back().r_eps;
  if (m >= 3) {
    const double r0 = tr[m - 3].r_eps, r1 = tr[m - 2].r_eps, r2 = tr[m - 1].r_eps;
    const double d1 = r1 - r0, d2 = r2 - r1, den = d2 - d1;
    if (den != 0.0) {
      const double corr = d2 * d2 / den;
      const double cand = r2 - corr;
      // r_eps decreases to r(f); a correction far beyond the last step is noise.
      if (std::isfinite(cand) && cand <= r2 && cand >= 0.0 &&
          std::abs(corr) <= 20.0 * std::abs(d2)) {
        rep.r_hat = cand;
      }
    }
  }

  const Vector& v = tr.back().v_eps;
  rep.boundary_drift = relative_gap(cone, v);
  rep.interior_eigenvector_found =
      m >= 2 && rep.boundary_drift >= 1e-6 &&
      hilbert(cone, v, tr[m - 2].v_eps) <= 1e-6;

  for (int k : {1, 2, 4, 8, 16, 32}) rep.cw_upper.push_back({u, k, cw_upper(f, u, k)});
  for (int k : {1, 8}) rep.cw_upper.push_back({v, k, cw_upper(f, v, k)});

  rep.cw_lower.push_back({u, cw_lower(f, u)});
  rep.cw_lower.push_back({v, cw_lower(f, v)});
  if (auto w = boundary_candidate(cone, v); w && in_cone(cone, *w, 0.0)) {
    rep.cw_lower.push_back({*w, cw_lower(f, *w)});
  }
  return rep;
}

double cw_upper(const Map& f, const Vector& y, int k) {
  const Cone& cone = f.cone();
  require_interior(cone, y, "y");
  if (k < 1) throw DomainError("k must be positive");
  Vector x = y;
  const double log_scale = normalized_orbit(f, x, cone.unit(), k);
  return std::exp((log_scale + std::log(m_ratio_value(cone, x, y))) / k);
}

double cw_lower(const Map& f, const Vector& y) {
  const Cone& cone = f.cone();
  cone.check_dim(y, "y");
  if (!in_cone(cone, y) || order_unit_norm(cone, y) == 0.0) {
    throw DomainError("y must be a nonzero point of the cone");
  }
  const RadialResult ext = radial_extension(f, y);
  if (!ext.converged) {
    throw ConvergenceError("radial extension did not converge");
  }
  return m_lower(cone, ext.value, y);
}

double escape_rate(const Map& f, const Vector& x, int k_max) {
  const Cone& cone = f.cone();
  require_interior(cone, x, "x");
  if (k_max < 1) throw DomainError("k_max must be positive");
  Vector z = x;
  const double log_scale = normalized_orbit(f, z, cone.unit(), k_max);
  return (log_scale + std::log(m_ratio_value(cone, z, x))) / k_max;
}

double contraction_bound(double m1, double eps) {
  if (!(m1 > 0.0) || !(eps > 0.0)) {
    throw DomainError("contraction bound needs positive m1 and eps");
  }
  const double r = std::log((m1 + eps) / eps);
  return 1.0 - (eps / (m1 + eps)) * (-std::expm1(-2.0 * r) / (2.0 * r));
}

}  // namespace conegeo
