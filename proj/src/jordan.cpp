#include "conegeo/jordan.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "conegeo/sym_layout.hpp"

namespace conegeo::jordan {

namespace {

void require_same(const Element& x, const Element& y) {
  if (!(x.algebra == y.algebra)) {
    throw DimensionError("jordan: algebra mismatch");
  }
  if (x.coords.size() != x.algebra.dim() || y.coords.size() != y.algebra.dim()) {
    throw DimensionError("jordan: coordinate length does not match algebra");
  }
}

constexpr double kClip = 1e-14;

}  // namespace

int Algebra::dim() const {
  return kind == AlgebraKind::Sym ? sym::packed_dim(n) : n;
}

Element unit(const Algebra& a) {
  Element e{a, Vector::Zero(a.dim())};
  switch (a.kind) {
    case AlgebraKind::Rn:
      e.coords.setOnes();
      break;
    case AlgebraKind::Spin:
      e.coords(0) = 1.0;
      break;
    case AlgebraKind::Sym:
      e.coords = sym::pack(Matrix::Identity(a.n, a.n));
      break;
  }
  return e;
}

double inner(const Element& x, const Element& y) {
  require_same(x, y);
  return x.coords.dot(y.coords);
}

Element product(const Element& x, const Element& y) {
  require_same(x, y);
  const Algebra& a = x.algebra;
  switch (a.kind) {
    case AlgebraKind::Rn:
      return {a, x.coords.cwiseProduct(y.coords)};
    case AlgebraKind::Spin: {
      Vector z(a.n);
      z(0) = x.coords.dot(y.coords);
      z.tail(a.n - 1) = x.coords(0) * y.coords.tail(a.n - 1) +
                        y.coords(0) * x.coords.tail(a.n - 1);
      return {a, z};
    }
    case AlgebraKind::Sym: {
      const Matrix X = sym::unpack(x.coords, a.n);
      const Matrix Y = sym::unpack(y.coords, a.n);
      return {a, sym::pack(0.5 * (X * Y + Y * X))};
    }
  }
  throw DimensionError("jordan: unknown algebra");
}

SpectralDecomposition spectral_decomposition(const Element& x) {
  const Algebra& a = x.algebra;
  if (x.coords.size() != a.dim()) {
    throw DimensionError("jordan: coordinate length does not match algebra");
  }
  SpectralDecomposition out;
  switch (a.kind) {
    case AlgebraKind::Rn: {
      std::vector<int> order(a.n);
      for (int i = 0; i < a.n; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](int i, int j) { return x.coords(i) < x.coords(j); });
      for (int i : order) {
        out.eigenvalues.push_back(x.coords(i));
        out.frame.push_back({a, Vector::Unit(a.n, i)});
      }
      break;
    }
    case AlgebraKind::Spin: {
      const double x0 = x.coords(0);
      const Vector bar = x.coords.tail(a.n - 1);
      const double r = bar.norm();
      if (r == 0.0) {
        out.eigenvalues.push_back(x0);
        out.frame.push_back(unit(a));
        break;
      }
      Vector lo(a.n), hi(a.n);
      lo(0) = 0.5;
      hi(0) = 0.5;
      lo.tail(a.n - 1) = -0.5 * bar / r;
      hi.tail(a.n - 1) = 0.5 * bar / r;
      out.eigenvalues = {x0 - r, x0 + r};
      out.frame = {{a, lo}, {a, hi}};
      break;
    }
    case AlgebraKind::Sym: {
      Eigen::SelfAdjointEigenSolver<Matrix> es(sym::unpack(x.coords, a.n));
      for (int i = 0; i < a.n; ++i) {
        const Vector v = es.eigenvectors().col(i);
        out.eigenvalues.push_back(es.eigenvalues()(i));
        out.frame.push_back({a, sym::pack(v * v.transpose())});
      }
      break;
    }
  }
  return out;
}

std::pair<double, double> spectral_bounds(const Element& x) {
  const Algebra& a = x.algebra;
  switch (a.kind) {
    case AlgebraKind::Rn:
      return {x.coords.minCoeff(), x.coords.maxCoeff()};
    case AlgebraKind::Spin: {
      const double r = x.coords.tail(a.n - 1).norm();
      return {x.coords(0) - r, x.coords(0) + r};
    }
    case AlgebraKind::Sym: {
      Eigen::SelfAdjointEigenSolver<Matrix> es(sym::unpack(x.coords, a.n),
                                               Eigen::EigenvaluesOnly);
      return {es.eigenvalues()(0), es.eigenvalues()(a.n - 1)};
    }
  }
  throw DimensionError("jordan: unknown algebra");
}

Element quadratic_apply(const Element& y, const Element& x) {
  require_same(x, y);
  const Algebra& a = x.algebra;
  if (a.kind == AlgebraKind::Sym) {
    const Matrix Y = sym::unpack(y.coords, a.n);
    return {a, sym::pack(Y * sym::unpack(x.coords, a.n) * Y)};
  }
  if (a.kind == AlgebraKind::Rn) {
    return {a, y.coords.cwiseProduct(y.coords).cwiseProduct(x.coords)};
  }
  const Element yx = product(y, x);
  Element out = product(y, yx);
  out.coords *= 2.0;
  out.coords -= product(product(y, y), x).coords;
  return out;
}

Element power(const Element& x, double t) {
  const bool integral = std::floor(t) == t;
  auto check = [&](const auto& eigenvalues) {
    if (t >= 0.0 && integral) return;
    double scale = 0.0;
    for (double l : eigenvalues) scale = std::max(scale, std::abs(l));
    for (double l : eigenvalues) {
      if (!(l > kClip * scale)) {
        throw DomainError("jordan: power with exponent " + std::to_string(t) +
                          " of a singular or non-positive element");
      }
    }
  };
  if (x.algebra.kind == AlgebraKind::Sym) {
    // V diag(lambda^t) V^T directly, without materializing the frame.
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym::unpack(x.coords, x.algebra.n));
    const Vector& ev = es.eigenvalues();
    check(std::vector<double>(ev.data(), ev.data() + ev.size()));
    const Vector p = ev.unaryExpr([t](double l) { return std::pow(l, t); });
    return {x.algebra, sym::pack(es.eigenvectors() * p.asDiagonal() *
                                 es.eigenvectors().transpose())};
  }
  const SpectralDecomposition sd = spectral_decomposition(x);
  check(sd.eigenvalues);
  Element out{x.algebra, Vector::Zero(x.algebra.dim())};
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    out.coords += std::pow(sd.eigenvalues[i], t) * sd.frame[i].coords;
  }
  return out;
}

double trace(const Element& x) {
  const Algebra& a = x.algebra;
  switch (a.kind) {
    case AlgebraKind::Rn:
      return x.coords.sum();
    case AlgebraKind::Spin:
      return 2.0 * x.coords(0);
    case AlgebraKind::Sym:
      return sym::unpack(x.coords, a.n).trace();
  }
  return 0.0;
}

Vector trace_dual(const Element& c) {
  return c.algebra.kind == AlgebraKind::Spin ? Vector(2.0 * c.coords) : c.coords;
}

}  // namespace conegeo::jordan
