#pragma once

// Euclidean Jordan algebras backing the symmetric cones: R^n with the
// componentwise product (orthant), the spin factor (Lorentz cone) and real
// symmetric matrices in packed layout (PSD cone).

#include <vector>

#include "conegeo/types.hpp"

namespace conegeo::jordan {

enum class AlgebraKind { Rn, Spin, Sym };

struct Algebra {
  AlgebraKind kind = AlgebraKind::Rn;
  /// Rn, Spin: vector length. Sym: matrix size.
  int n = 0;

  int dim() const;
  bool operator==(const Algebra&) const = default;
};

struct Element {
  Algebra algebra;
  Vector coords;
};

Element unit(const Algebra& a);

/// Coordinate inner product. For Sym this is tr(XY); for Spin x0*y0 + <xbar, ybar>.
double inner(const Element& x, const Element& y);

/// x . y. Throws DimensionError on algebra mismatch.
Element product(const Element& x, const Element& y);

struct SpectralDecomposition {
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Primitive idempotents matching eigenvalues.
  std::vector<Element> frame;
};

/// x = sum lambda_i c_i over a Jordan frame. A spin element with xbar = 0 is
/// returned as a single eigenvalue with frame {e}.
SpectralDecomposition spectral_decomposition(const Element& x);

/// Smallest and largest spectral values, without building the frame.
std::pair<double, double> spectral_bounds(const Element& x);

/// P(y)x = 2 y.(y.x) - (y.y).x; for Sym evaluated as YXY.
Element quadratic_apply(const Element& y, const Element& x);

/// sum lambda_i^t c_i. Negative or fractional t requires every eigenvalue to
/// exceed the clipping threshold 1e-14 * max|lambda|.
Element power(const Element& x, double t);

/// Sum of eigenvalues.
double trace(const Element& x);

/// Coordinates of the linear functional w -> tr(c . w).
Vector trace_dual(const Element& c);

}  // namespace conegeo::jordan
