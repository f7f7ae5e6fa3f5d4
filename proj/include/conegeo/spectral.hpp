#pragma once

// Cone spectral radius r(f) of an order-preserving homogeneous map through
// the perturbed maps f_eps(x) = f(x) + eps ||x||_u u, whose normalized
// iteration is a Hilbert-metric contraction with a unique fixed point.

#include <vector>

#include "conegeo/maps.hpp"

namespace conegeo {

struct EigenSolveResult {
  double eps = 0.0;
  /// Normalized, ||v||_u = 1.
  Vector v_eps;
  /// ||f_eps(v_eps)||_u.
  double r_eps = 0.0;
  int iterations = 0;
  /// Largest observed ratio of consecutive Hilbert steps.
  double measured_contraction = 0.0;
  bool converged = false;
};

struct CwUpperEntry {
  Vector y;
  int k = 1;
  double bound = 0.0;
};

struct CwLowerEntry {
  Vector y;
  double bound = 0.0;
};

struct SpectralOptions {
  double eps0 = 1.0;
  double decay = 0.5;
  double tol = 1e-10;
  /// Per-eps iteration budget.
  int max_iter = 2000000;
  /// Last index j of eps_j = eps0 * decay^j.
  int max_steps = 60;
};

struct SpectralReport {
  double r_hat = 0.0;
  std::vector<EigenSolveResult> eps_trace;
  std::vector<CwUpperEntry> cw_upper;
  std::vector<CwLowerEntry> cw_lower;
  bool interior_eigenvector_found = false;
  /// interior_gap(v) / ||v||_u for the last approximate eigenvector.
  double boundary_drift = 0.0;
  /// The continuation stopped because an eps-solve ran out of budget.
  bool truncated = false;
};

/// min_{k <= k_max} M(f^k(u)/u)^{1/k}, an upper bound on r(f).
double power_radius(const Map& f, const Vector& u, int k_max);

/// Fixed point of x -> f_eps(x)/||f_eps(x)||_u, iterated from `start` (or u)
/// until the Hilbert step drops below tol. Gives up early, with
/// converged = false, once the observed contraction rate cannot reach tol
/// within max_iter.
EigenSolveResult approx_eigenpair(const Map& f, double eps, const Vector& u,
                                  double tol, int max_iter,
                                  const Vector* start = nullptr);

/// eps -> 0 continuation with warm starts, one Aitken step on the r_eps tail,
/// and Collatz-Wielandt certificates.
SpectralReport spectral_radius(const Map& f, const Vector& u,
                               const SpectralOptions& opts = {});

/// M(f^k(y)/y)^{1/k}, an upper bound on r(f). y interior.
double cw_upper(const Map& f, const Vector& y, int k);

/// m(f^(y)/y) with f^ the radial extension, a lower bound on r(f). y in C \ {0}.
double cw_lower(const Map& f, const Vector& y);

/// (1/k) log M(f^k(x)/x), tending to log r(f).
double escape_rate(const Map& f, const Vector& x, int k_max);

/// 1 - (eps/(m1+eps)) (1 - e^{-2R})/(2R), R = log((m1+eps)/eps): the
/// contraction constant of the normalized perturbed map, m1 = M(f(u)/u).
double contraction_bound(double m1, double eps);

}  // namespace conegeo
