#pragma once

// Concrete closed cones with nonempty interior and the order calculus
// M(x/y) = inf{b : x <= b y}, m(x/y) = sup{a >= 0 : a y <= x}.

#include <optional>
#include <random>

#include "conegeo/jordan.hpp"
#include "conegeo/types.hpp"

namespace conegeo {

enum class ConeKind { Orthant, Polyhedral, Lorentz, Psd };

const char* to_string(ConeKind kind);

class Cone {
 public:
  static Cone orthant(int n, std::optional<Vector> unit = std::nullopt);
  /// Rows of `facets` are the functionals phi_i; C = {x : phi_i(x) >= 0}.
  static Cone polyhedral(const Matrix& facets,
                         std::optional<Vector> unit = std::nullopt);
  /// Ambient dimension n; x = (x0, xbar) with x0 >= |xbar|.
  static Cone lorentz(int n, std::optional<Vector> unit = std::nullopt);
  /// n x n positive semidefinite matrices in packed layout.
  static Cone psd(int n, std::optional<Vector> unit = std::nullopt);

  ConeKind kind() const { return kind_; }
  /// Size parameter as written in the descriptor (matrix size for Psd).
  int n() const { return n_; }
  int ambient_dim() const { return dim_; }
  const Vector& unit() const { return unit_; }
  /// Facet functionals scaled to unit Euclidean length (Orthant, Polyhedral).
  const Matrix& facets() const { return facets_; }
  /// Facets exactly as supplied.
  const Matrix& raw_facets() const { return raw_facets_; }
  /// Jordan algebra for the symmetric kinds.
  std::optional<jordan::Algebra> algebra() const;
  /// True for the symmetric kinds when the order unit is the Jordan unit.
  bool unit_is_jordan_identity() const { return unit_is_e_; }

  jordan::Element element(const Vector& x) const;
  /// u^{-1/2} for the symmetric kinds.
  const Vector& unit_inv_sqrt() const { return unit_inv_sqrt_; }

  void check_dim(const Vector& x, const char* what = "point") const;

  bool operator==(const Cone& other) const;

  /// Zero-dimensional placeholder; only useful as a member to assign later.
  Cone() = default;

 private:
  void set_unit(std::optional<Vector> unit, Vector fallback);

  ConeKind kind_ = ConeKind::Orthant;
  int n_ = 0;
  int dim_ = 0;
  Vector unit_;
  Vector unit_inv_sqrt_;
  Matrix facets_;
  Matrix raw_facets_;
  bool unit_is_e_ = false;
};

/// phi(x) = <coords, x> in the coordinate inner product (tr(PhiX) for Psd).
struct DualFunctional {
  Vector coords;
  double operator()(const Vector& x) const { return coords.dot(x); }
};

/// min_i phi_i(x) (unit facets), x0 - |xbar| (Lorentz), lambda_min (Psd).
double interior_gap(const Cone& cone, const Vector& x);

/// interior_gap(x) / ||x||_u; zero for x = 0.
double relative_gap(const Cone& cone, const Vector& x);

/// interior_gap(x) > 1e-12 * ||x||_u.
bool is_interior(const Cone& cone, const Vector& x);

/// interior_gap(x) >= -tol * ||x||_u.
bool in_cone(const Cone& cone, const Vector& x, double tol = 1e-9);

struct OrderRatio {
  double value = 0.0;
  /// Element of the dual slice {phi in C*, phi(u) = 1} with phi(x)/phi(y) = value.
  DualFunctional witness;
};

/// M(x/y) for any x and y in the interior, with a certifying dual functional.
OrderRatio m_ratio(const Cone& cone, const Vector& x, const Vector& y);

/// M(x/y) without the witness.
double m_ratio_value(const Cone& cone, const Vector& x, const Vector& y);

/// m(x/y) for x in C and y in C \ {0}; y may lie on the boundary.
double m_lower(const Cone& cone, const Vector& x, const Vector& y);

/// ||x||_u = max(M(x/u), M(-x/u)) for the cone's order unit.
double order_unit_norm(const Cone& cone, const Vector& x);
/// Same with an explicit interior unit u.
double order_unit_norm(const Cone& cone, const Vector& x, const Vector& u);

/// Random interior point, roughly unit scale.
Vector sample_interior(const Cone& cone, std::mt19937_64& rng);

/// Random nonzero boundary point.
Vector sample_boundary(const Cone& cone, std::mt19937_64& rng);

}  // namespace conegeo
