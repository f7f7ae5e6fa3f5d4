#include "conegeo/sym_layout.hpp"

#include <cmath>
#include <utility>

namespace conegeo::sym {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

int packed_dim(int n) { return n * (n + 1) / 2; }

int matrix_size(int packed) {
  int n = 0;
  while (packed_dim(n) < packed) ++n;
  if (packed_dim(n) != packed) {
    throw DimensionError("packed length " + std::to_string(packed) +
                         " is not a triangular number");
  }
  return n;
}

int index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

Vector pack(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  Vector v(packed_dim(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    v(k++) = x(i, i);
    for (int j = i + 1; j < n; ++j) v(k++) = kSqrt2 * 0.5 * (x(i, j) + x(j, i));
  }
  return v;
}

Matrix unpack(const Vector& v, int n) {
  if (v.size() != packed_dim(n)) {
    throw DimensionError("expected packed length " +
                         std::to_string(packed_dim(n)) + ", got " +
                         std::to_string(v.size()));
  }
  Matrix x(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    x(i, i) = v(k++);
    for (int j = i + 1; j < n; ++j) {
      const double a = v(k++) / kSqrt2;
      x(i, j) = a;
      x(j, i) = a;
    }
  }
  return x;
}

}  // namespace conegeo::sym
