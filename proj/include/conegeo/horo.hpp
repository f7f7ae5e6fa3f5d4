#pragma once

// Horofunctions of the Funk, reverse Funk and Hilbert metrics, parameterized by
// boundary points, and the Wolff-type inequalities they satisfy along orbits.

#include <optional>
#include <vector>

#include "conegeo/maps.hpp"
#include "conegeo/metrics.hpp"

namespace conegeo {

enum class HoroKind { RFunk, FunkSym, HilbertSym };

const char* to_string(HoroKind kind);

class Horofunction {
 public:
  /// x -> log M(y/x) - log M(y/b), y a nonzero boundary point. Any cone;
  /// b defaults to the cone's order unit.
  static Horofunction rfunk(const Cone& cone, Vector y,
                            std::optional<Vector> base = std::nullopt);
  /// x -> log M(z/x^{-1}) on a symmetric cone, base point the Jordan unit e.
  /// z is rescaled to ||z||_e = 1.
  static Horofunction funk_sym(const Cone& cone, Vector z);
  /// Sum of the reverse Funk horofunction of y and the Funk horofunction of z,
  /// base e; requires y o z = 0.
  static Horofunction hilbert_sym(const Cone& cone, Vector y, Vector z);

  HoroKind kind() const { return kind_; }
  const Cone& cone() const { return cone_; }
  /// Reverse Funk parameter (RFunk, HilbertSym).
  const Vector& y() const { return y_; }
  /// Funk parameter (FunkSym, HilbertSym).
  const Vector& z() const { return z_; }
  const Vector& base() const { return base_; }

  double operator()(const Vector& x) const;

 private:
  Horofunction(HoroKind kind, Cone cone) : kind_(kind), cone_(std::move(cone)) {}
  HoroKind kind_;
  Cone cone_;
  Vector y_;
  Vector z_;
  Vector base_;
};

double eval_horofunction(const Horofunction& h, const Vector& x);

/// rho(x, y_n) - rho(b, y_n) at the last element of a sequence of interior
/// points running to the boundary, after checking that the last three values
/// agree within 1e-7. Throws ConvergenceError otherwise.
double horo_limit_oracle(MetricKind kind, const Cone& cone,
                         const std::vector<Vector>& seq, const Vector& b,
                         const Vector& x);

/// phi in C* \ {0} with log phi <= h: mu_1 tr(c_1 o .) for the top spectral
/// pair (mu_1, c_1) of z. FunkSym only.
DualFunctional subgradient_functional(const Horofunction& h);

struct WolffReport {
  /// max over samples of h_F(f(x)) - h_F(x) - log r.
  double funk_max_slack = 0.0;
  /// max over samples of h_R(f(x)) - h_R(x) + log r.
  double rfunk_max_slack = 0.0;
  /// max over samples of h_H(f(x)) - h_H(x).
  double hilbert_max_slack = 0.0;
  double max_violation = 0.0;
  /// Largest |slack| over all inequalities and samples.
  double max_abs_gap = 0.0;
  int samples = 0;
};

/// Evaluates the three inequalities at each sample; absent horofunctions are
/// skipped (their slack reported as -inf).
WolffReport check_wolff(const Map& f, const std::optional<Horofunction>& h_f,
                        const std::optional<Horofunction>& h_r,
                        const std::optional<Horofunction>& h_h,
                        const std::vector<Vector>& samples, double r_hat);

}  // namespace conegeo
