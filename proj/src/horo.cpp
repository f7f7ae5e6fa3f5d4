#include "conegeo/horo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conegeo {

namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kOrthoTol = 1e-10;

void require_symmetric(const Cone& cone) {
  if (!cone.algebra()) {
    throw DomainError("symmetric-cone horofunctions need an orthant, Lorentz or PSD cone");
  }
}

// Nonzero point of the cone with (numerically) zero interior gap.
void require_boundary(const Cone& cone, const Vector& y, const char* what) {
  cone.check_dim(y, what);
  if (order_unit_norm(cone, y) == 0.0) {
    throw DomainError(std::string(what) + " must be nonzero");
  }
  if (!in_cone(cone, y)) throw DomainError(std::string(what) + " is outside the cone");
  if (relative_gap(cone, y) > kBoundaryTol) {
    throw DomainError(std::string(what) + " must lie on the cone boundary");
  }
}

// Rescales y to ||y||_e = max |lambda| = 1.
Vector e_normalized(const Cone& cone, Vector y) {
  const auto [lo, hi] = jordan::spectral_bounds(cone.element(y));
  const double s = std::max(std::abs(lo), std::abs(hi));
  return y / s;
}

void require_interior_x(const Cone& cone, const Vector& x) {
  cone.check_dim(x, "x");
  if (!is_interior(cone, x)) throw DomainError("horofunction argument must be interior");
}

double log_pos(double v) {
  if (!(v > 0.0)) throw DomainError("horofunction argument outside the cone");
  return std::log(v);
}

// log M(z/x^{-1}) = log lambda_max(P(x^{1/2}) z).
double funk_sym_value(const Cone& cone, const Vector& z, const Vector& x) {
  const jordan::Element xh = jordan::power(cone.element(x), 0.5);
  const jordan::Element w = jordan::quadratic_apply(xh, cone.element(z));
  return log_pos(jordan::spectral_bounds(w).second);
}

}  // namespace

const char* to_string(HoroKind kind) {
  switch (kind) {
    case HoroKind::RFunk:
      return "hR";
    case HoroKind::FunkSym:
      return "hF";
    case HoroKind::HilbertSym:
      return "hH";
  }
  return "?";
}

Horofunction Horofunction::rfunk(const Cone& cone, Vector y,
                                 std::optional<Vector> base) {
  require_boundary(cone, y, "y");
  Horofunction h(HoroKind::RFunk, cone);
  h.base_ = base ? std::move(*base) : cone.unit();
  cone.check_dim(h.base_, "base point");
  if (!is_interior(cone, h.base_)) throw DomainError("base point must be interior");
  // Scaling y by M(y/b) makes the base term vanish.
  h.y_ = y / m_ratio_value(cone, y, h.base_);
  return h;
}

Horofunction Horofunction::funk_sym(const Cone& cone, Vector z) {
  require_symmetric(cone);
  require_boundary(cone, z, "z");
  Horofunction h(HoroKind::FunkSym, cone);
  h.z_ = e_normalized(cone, std::move(z));
  h.base_ = jordan::unit(*cone.algebra()).coords;
  return h;
}

Horofunction Horofunction::hilbert_sym(const Cone& cone, Vector y, Vector z) {
  require_symmetric(cone);
  require_boundary(cone, y, "y");
  require_boundary(cone, z, "z");
  Horofunction h(HoroKind::HilbertSym, cone);
  h.y_ = e_normalized(cone, std::move(y));
  h.z_ = e_normalized(cone, std::move(z));
  const double prod =
      jordan::product(cone.element(h.y_), cone.element(h.z_)).coords.norm();
  if (prod > kOrthoTol) {
    throw DomainError("Hilbert horofunction parameters must satisfy y o z = 0");
  }
  h.base_ = jordan::unit(*cone.algebra()).coords;
  return h;
}

double Horofunction::operator()(const Vector& x) const {
  require_interior_x(cone_, x);
  switch (kind_) {
    case HoroKind::RFunk:
      return log_pos(m_ratio_value(cone_, y_, x));
    case HoroKind::FunkSym:
      return funk_sym_value(cone_, z_, x);
    case HoroKind::HilbertSym:
      return funk_sym_value(cone_, z_, x) + log_pos(m_ratio_value(cone_, y_, x));
  }
  return 0.0;
}

double eval_horofunction(const Horofunction& h, const Vector& x) { return h(x); }

double horo_limit_oracle(MetricKind kind, const Cone& cone,
                         const std::vector<Vector>& seq, const Vector& b,
                         const Vector& x) {
  if (seq.size() < 3) throw ConvergenceError("boundary sequence needs at least three points");
  if (kind == MetricKind::Thompson) {
    throw DomainError("limit oracle supports funk, rfunk and hilbert");
  }
  const double first_gap = relative_gap(cone, seq.front());
  const double last_gap = relative_gap(cone, seq.back());
  if (!(last_gap <= 1e-4) || !(last_gap < first_gap)) {
    throw ConvergenceError("sequence does not run to the boundary");
  }
  std::vector<double> vals;
  for (std::size_t i = seq.size() - 3; i < seq.size(); ++i) {
    vals.push_back(distance(kind, cone, x, seq[i]) - distance(kind, cone, b, seq[i]));
  }
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  if (!std::isfinite(*lo) || !std::isfinite(*hi) || *hi - *lo > 1e-7) {
    throw ConvergenceError("horofunction limit tail is not Cauchy");
  }
  return vals.back();
}

DualFunctional subgradient_functional(const Horofunction& h) {
  if (h.kind() != HoroKind::FunkSym) {
    throw DomainError("subgradient functional is available for Funk horofunctions of symmetric cones");
  }
  const jordan::SpectralDecomposition sd =
      jordan::spectral_decomposition(h.cone().element(h.z()));
  return {sd.eigenvalues.back() * jordan::trace_dual(sd.frame.back())};
}

WolffReport check_wolff(const Map& f, const std::optional<Horofunction>& h_f,
                        const std::optional<Horofunction>& h_r,
                        const std::optional<Horofunction>& h_h,
                        const std::vector<Vector>& samples, double r_hat) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  WolffReport rep;
  rep.funk_max_slack = rep.rfunk_max_slack = rep.hilbert_max_slack = kNegInf;
  const double log_r = std::log(r_hat);
  for (const Vector& x : samples) {
    const Vector fx = f.apply(x);
    auto track = [&](const std::optional<Horofunction>& h, double shift, double& slot) {
      if (!h) return;
      const double slack = (*h)(fx) - (*h)(x) + shift;
      slot = std::max(slot, slack);
      rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(slack));
    };
    track(h_f, -log_r, rep.funk_max_slack);
    track(h_r, log_r, rep.rfunk_max_slack);
    track(h_h, 0.0, rep.hilbert_max_slack);
    ++rep.samples;
  }
  rep.max_violation = std::max(
      {0.0, rep.funk_max_slack, rep.rfunk_max_slack, rep.hilbert_max_slack});
  return rep;
}

}  // namespace conegeo
