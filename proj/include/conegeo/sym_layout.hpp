#pragma once

// Packed storage for real symmetric n x n matrices.
//
// Entries are stored row-major over the upper triangle, (0,0), (0,1), ...,
// (0,n-1), (1,1), ..., (n-1,n-1). Off-diagonal entries are stored once and
// multiplied by sqrt(2), so the coordinate dot product of two packed vectors
// equals tr(XY).

#include "conegeo/types.hpp"

namespace conegeo::sym {

int packed_dim(int n);

/// Matrix size n for a packed dimension n(n+1)/2; throws if none exists.
int matrix_size(int packed);

int index(int n, int i, int j);

Vector pack(const Matrix& x);
Matrix unpack(const Vector& v, int n);

}  // namespace conegeo::sym
