#pragma once
// Random generators and reference computations shared by the test binaries.
// The reference computations avoid the library's code paths: facet ratios are
// evaluated from the raw facet rows, Lorentz ratios from the defining
// quadratic, PSD ratios from a generalized eigensolver.
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "conegeo/cone.hpp"
#include "conegeo/sym_layout.hpp"

namespace support {

using conegeo::Matrix;
using conegeo::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Vector normal_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }
  Vector unit_vector(int n) {
    Vector v = normal_vector(n);
    while (v.norm() < 1e-6) v = normal_vector(n);
    return v / v.norm();
  }
  // Orthogonal matrix from the QR factorization of a Gaussian matrix.
  Matrix orthogonal(int n) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = normal();
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(n, n);
  }
  Matrix positive_matrix(int n, double lo = 0.1, double hi = 1.0) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = uniform(lo, hi);
    }
    return a;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// {x : x0 >= |x1|, x0 >= |x2|}, a cone over a square.
inline Matrix square_cone_facets() {
  Matrix f(4, 3);
  f << 1, 1, 0,  //
      1, -1, 0,  //
      1, 0, 1,   //
      1, 0, -1;
  return f;
}

inline conegeo::Cone square_cone() {
  Vector u(3);
  u << 1, 0, 0;
  return conegeo::Cone::polyhedral(square_cone_facets(), u);
}

inline Matrix sym_matrix(const Vector& packed) {
  return conegeo::sym::unpack(packed, conegeo::sym::matrix_size(static_cast<int>(packed.size())));
}

inline Vector packed(const Matrix& m) { return conegeo::sym::pack(m); }

// Interior point with spectral spread at most e^{2 spread}, overall scale e^{+-scale}.
inline Vector interior_point(const conegeo::Cone& cone, Gen& g, double spread = 1.5,
                             double scale = 1.0) {
  const double s = std::exp(g.uniform(-scale, scale));
  switch (cone.kind()) {
    case conegeo::ConeKind::Orthant: {
      Vector x(cone.ambient_dim());
      for (int i = 0; i < x.size(); ++i) x(i) = s * std::exp(g.uniform(-spread, spread));
      return x;
    }
    case conegeo::ConeKind::Polyhedral: {
      // Rejection sampling around the order unit, facets bounded away from 0.
      const Matrix& f = cone.raw_facets();
      const double floor = std::exp(-2.0 * spread);
      for (;;) {
        Vector x = cone.unit() + 0.9 * g.uniform(0.0, 1.0) * g.unit_vector(cone.ambient_dim());
        const Vector fx = f * x;
        const Vector fu = f * cone.unit();
        if ((fx.array() / fu.array()).minCoeff() > floor) return s * x;
      }
    }
    case conegeo::ConeKind::Lorentz: {
      const int n = cone.ambient_dim();
      Vector x(n);
      const double r = 1.0 - std::exp(-g.uniform(0.0, 2.0 * spread));
      x(0) = 1.0;
      x.tail(n - 1) = r * g.unit_vector(n - 1);
      return s * x;
    }
    case conegeo::ConeKind::Psd: {
      const int n = cone.n();
      const Matrix q = g.orthogonal(n);
      Vector d(n);
      for (int i = 0; i < n; ++i) d(i) = std::exp(g.uniform(-spread, spread));
      return packed(s * q * d.asDiagonal() * q.transpose());
    }
  }
  return {};
}

// ---- reference order ratios -------------------------------------------------

// max_i phi_i(x)/phi_i(y) over raw facet rows; y interior.
inline double facet_max_ratio(const Matrix& facets, const Vector& x, const Vector& y) {
  const Vector fx = facets * x;
  const Vector fy = facets * y;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < fx.size(); ++i) best = std::max(best, fx(i) / fy(i));
  return best;
}

// sup{a : a y <= x} over raw facet rows; y in C \ {0}, x in C.
inline double facet_min_ratio(const Matrix& facets, const Vector& x, const Vector& y) {
  const Vector fx = facets * x;
  const Vector fy = facets * y;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < fx.size(); ++i) {
    if (fy(i) > 0) best = std::min(best, fx(i) / fy(i));
  }
  return best;
}

// Largest root of (b y0 - x0)^2 - |b ybar - xbar|^2 = 0, y interior.
inline double lorentz_max_ratio(const Vector& x, const Vector& y) {
  const int n = static_cast<int>(x.size());
  const Vector xb = x.tail(n - 1);
  const Vector yb = y.tail(n - 1);
  const double a = y(0) * y(0) - yb.squaredNorm();
  const double b = -2.0 * (x(0) * y(0) - xb.dot(yb));
  const double c = x(0) * x(0) - xb.squaredNorm();
  const double disc = std::max(0.0, b * b - 4 * a * c);
  const double q = -0.5 * (b - std::sqrt(disc));  // b <= 0 for x, y in the cone
  return std::max(q / a, c / q);
}

// Largest generalized eigenvalue of X v = l Y v.
inline double psd_max_ratio(const Vector& x, const Vector& y) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(sym_matrix(x), sym_matrix(y));
  return es.eigenvalues().maxCoeff();
}

inline double psd_min_ratio(const Vector& x, const Vector& y) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(sym_matrix(x), sym_matrix(y));
  return es.eigenvalues().minCoeff();
}

// M(x/y) by the reference route for the cone's kind; y interior.
inline double reference_max_ratio(const conegeo::Cone& cone, const Vector& x, const Vector& y) {
  switch (cone.kind()) {
    case conegeo::ConeKind::Orthant:
      return (x.array() / y.array()).maxCoeff();
    case conegeo::ConeKind::Polyhedral:
      return facet_max_ratio(cone.raw_facets(), x, y);
    case conegeo::ConeKind::Lorentz:
      return lorentz_max_ratio(x, y);
    case conegeo::ConeKind::Psd:
      return psd_max_ratio(x, y);
  }
  return 0.0;
}

// ---- reference spectral quantities -----------------------------------------

// Perron root of an entrywise positive matrix by plain power iteration with
// the 1-norm, run until the Collatz-Wielandt bracket closes.
inline double perron_root(const Matrix& a) {
  Vector x = Vector::Ones(a.rows());
  for (int it = 0; it < 100000; ++it) {
    const Vector y = a * x;
    const double hi = (y.array() / x.array()).maxCoeff();
    const double lo = (y.array() / x.array()).minCoeff();
    x = y / y.sum();
    if (hi - lo <= 1e-15 * hi) return 0.5 * (hi + lo);
  }
  const Vector y = a * x;
  return (y.array() / x.array()).maxCoeff();
}

// Root of g on [lo, hi] with g(lo), g(hi) of opposite signs.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// M^k X (M^k)^T for M = [[1,1],[0,1]], written out entrywise.
inline Matrix shear_power_closed_form(double a, double b, double c, double k) {
  Matrix out(2, 2);
  out << a + 2 * k * b + k * k * c, b + k * c, b + k * c, c;
  return out;
}

inline Matrix shear() {
  Matrix m(2, 2);
  m << 1, 1, 0, 1;
  return m;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix mat(int rows, int cols, std::initializer_list<double> xs) {
  Matrix m(rows, cols);
  int i = 0;
  for (double x : xs) {
    m(i / cols, i % cols) = x;
    ++i;
  }
  return m;
}

// FNV-1a over a byte string.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace support
