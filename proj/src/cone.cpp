#include "conegeo/cone.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "conegeo/sym_layout.hpp"

namespace conegeo {

namespace {

constexpr double kInteriorTol = 1e-12;

bool is_jordan(ConeKind k) { return k != ConeKind::Polyhedral; }

jordan::Element to_e(const Cone& c, const Vector& x) { return c.element(x); }

// Spectrum of x relative to the interior point y: ratios phi_i(x)/phi_i(y)
// for facet cones, sigma(P(y^{-1/2}) x) for the Jordan kinds.
std::pair<double, double> relative_bounds(const Cone& cone, const Vector& x,
                                          const Vector& y) {
  if (cone.kind() == ConeKind::Orthant || cone.kind() == ConeKind::Polyhedral) {
    const Vector fx = cone.facets() * x;
    const Vector fy = cone.facets() * y;
    const Vector r = fx.cwiseQuotient(fy);
    return {r.minCoeff(), r.maxCoeff()};
  }
  const jordan::Element ye = to_e(cone, y);
  const jordan::Element z =
      jordan::quadratic_apply(jordan::power(ye, -0.5), to_e(cone, x));
  return jordan::spectral_bounds(z);
}

// (gap, ||x||_u) in one pass.
std::pair<double, double> gap_and_norm(const Cone& cone, const Vector& x) {
  cone.check_dim(x);
  switch (cone.kind()) {
    case ConeKind::Orthant:
    case ConeKind::Polyhedral: {
      const Vector fx = cone.facets() * x;
      const Vector fu = cone.facets() * cone.unit();
      return {fx.minCoeff(), fx.cwiseAbs().cwiseQuotient(fu).maxCoeff()};
    }
    case ConeKind::Lorentz: {
      const double gap = x(0) - x.tail(x.size() - 1).norm();
      if (cone.unit_is_jordan_identity()) {
        const double r = x.tail(x.size() - 1).norm();
        return {gap, std::max(std::abs(x(0) + r), std::abs(x(0) - r))};
      }
      return {gap, order_unit_norm(cone, x, cone.unit())};
    }
    case ConeKind::Psd: {
      const auto [lo, hi] = jordan::spectral_bounds(cone.element(x));
      if (cone.unit_is_jordan_identity()) {
        return {lo, std::max(std::abs(lo), std::abs(hi))};
      }
      return {lo, order_unit_norm(cone, x, cone.unit())};
    }
  }
  return {0.0, 0.0};
}

void require_interior(const Cone& cone, const Vector& y, const char* what) {
  const auto [gap, norm] = gap_and_norm(cone, y);
  if (!(gap > kInteriorTol * norm) || !std::isfinite(gap)) {
    throw DomainError(std::string(what) + " is not in the interior of the " +
                      to_string(cone.kind()) + " cone (gap " +
                      std::to_string(gap) + ")");
  }
}

Matrix normalize_rows(const Matrix& f) {
  Matrix out = f;
  for (int i = 0; i < f.rows(); ++i) {
    const double n = f.row(i).norm();
    if (n == 0.0) throw DimensionError("polyhedral cone: zero facet functional");
    out.row(i) /= n;
  }
  return out;
}

}  // namespace

const char* to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Orthant:
      return "orthant";
    case ConeKind::Polyhedral:
      return "polyhedral";
    case ConeKind::Lorentz:
      return "lorentz";
    case ConeKind::Psd:
      return "psd";
  }
  return "?";
}

void Cone::set_unit(std::optional<Vector> unit, Vector fallback) {
  unit_ = unit ? std::move(*unit) : std::move(fallback);
  check_dim(unit_, "order unit");
  if (is_jordan(kind_)) {
    const jordan::Element e = jordan::unit(*algebra());
    unit_is_e_ = unit_ == e.coords;
  }
  const auto [gap, norm] = [&] {
    if (is_jordan(kind_)) {
      const auto b = jordan::spectral_bounds(element(unit_));
      return std::pair<double, double>{b.first, std::abs(b.second)};
    }
    const Vector fx = facets_ * unit_;
    return std::pair<double, double>{fx.minCoeff(), fx.cwiseAbs().maxCoeff()};
  }();
  if (!(gap > kInteriorTol * norm)) {
    throw DomainError(std::string("order unit is not interior to the ") +
                      to_string(kind_) + " cone");
  }
  if (is_jordan(kind_)) {
    unit_inv_sqrt_ = jordan::power(element(unit_), -0.5).coords;
  }
}

Cone Cone::orthant(int n, std::optional<Vector> unit) {
  if (n < 1) throw DimensionError("orthant: n must be positive");
  Cone c;
  c.kind_ = ConeKind::Orthant;
  c.n_ = n;
  c.dim_ = n;
  c.facets_ = Matrix::Identity(n, n);
  c.raw_facets_ = c.facets_;
  c.set_unit(std::move(unit), Vector::Ones(n));
  return c;
}

Cone Cone::polyhedral(const Matrix& facets, std::optional<Vector> unit) {
  if (facets.rows() < 1 || facets.cols() < 1) {
    throw DimensionError("polyhedral: need at least one facet");
  }
  Cone c;
  c.kind_ = ConeKind::Polyhedral;
  c.n_ = static_cast<int>(facets.cols());
  c.dim_ = c.n_;
  c.raw_facets_ = facets;
  c.facets_ = normalize_rows(facets);
  c.set_unit(std::move(unit), Vector::Ones(c.n_));
  return c;
}

Cone Cone::lorentz(int n, std::optional<Vector> unit) {
  if (n < 2) throw DimensionError("lorentz: n must be at least 2");
  Cone c;
  c.kind_ = ConeKind::Lorentz;
  c.n_ = n;
  c.dim_ = n;
  c.set_unit(std::move(unit), Vector::Unit(n, 0));
  return c;
}

Cone Cone::psd(int n, std::optional<Vector> unit) {
  if (n < 1) throw DimensionError("psd: n must be positive");
  Cone c;
  c.kind_ = ConeKind::Psd;
  c.n_ = n;
  c.dim_ = sym::packed_dim(n);
  c.set_unit(std::move(unit), sym::pack(Matrix::Identity(n, n)));
  return c;
}

std::optional<jordan::Algebra> Cone::algebra() const {
  switch (kind_) {
    case ConeKind::Orthant:
      return jordan::Algebra{jordan::AlgebraKind::Rn, n_};
    case ConeKind::Lorentz:
      return jordan::Algebra{jordan::AlgebraKind::Spin, n_};
    case ConeKind::Psd:
      return jordan::Algebra{jordan::AlgebraKind::Sym, n_};
    case ConeKind::Polyhedral:
      return std::nullopt;
  }
  return std::nullopt;
}

jordan::Element Cone::element(const Vector& x) const {
  auto a = algebra();
  if (!a) throw DimensionError("polyhedral cones carry no Jordan algebra");
  check_dim(x);
  return {*a, x};
}

void Cone::check_dim(const Vector& x, const char* what) const {
  if (x.size() != dim_) {
    throw DimensionError(std::string(what) + " has dimension " +
                         std::to_string(x.size()) + ", " + to_string(kind_) +
                         " cone expects " + std::to_string(dim_));
  }
}

bool Cone::operator==(const Cone& other) const {
  return kind_ == other.kind_ && n_ == other.n_ && unit_ == other.unit_ &&
         raw_facets_.rows() == other.raw_facets_.rows() &&
         raw_facets_.cols() == other.raw_facets_.cols() &&
         raw_facets_ == other.raw_facets_;
}

double interior_gap(const Cone& cone, const Vector& x) {
  cone.check_dim(x);
  switch (cone.kind()) {
    case ConeKind::Orthant:
    case ConeKind::Polyhedral:
      return (cone.facets() * x).minCoeff();
    case ConeKind::Lorentz:
      return x(0) - x.tail(x.size() - 1).norm();
    case ConeKind::Psd: {
      Eigen::SelfAdjointEigenSolver<Matrix> es(sym::unpack(x, cone.n()),
                                               Eigen::EigenvaluesOnly);
      return es.eigenvalues()(0);
    }
  }
  return 0.0;
}

double relative_gap(const Cone& cone, const Vector& x) {
  const auto [gap, norm] = gap_and_norm(cone, x);
  return norm > 0.0 ? gap / norm : 0.0;
}

bool is_interior(const Cone& cone, const Vector& x) {
  const auto [gap, norm] = gap_and_norm(cone, x);
  return std::isfinite(gap) && gap > kInteriorTol * norm;
}

bool in_cone(const Cone& cone, const Vector& x, double tol) {
  const auto [gap, norm] = gap_and_norm(cone, x);
  return std::isfinite(gap) && gap >= -tol * norm;
}

double m_ratio_value(const Cone& cone, const Vector& x, const Vector& y) {
  cone.check_dim(x);
  require_interior(cone, y, "denominator");
  if (x == y) return 1.0;
  return relative_bounds(cone, x, y).second;
}

OrderRatio m_ratio(const Cone& cone, const Vector& x, const Vector& y) {
  cone.check_dim(x);
  require_interior(cone, y, "denominator");
  OrderRatio out;
  if (cone.kind() == ConeKind::Orthant || cone.kind() == ConeKind::Polyhedral) {
    const Vector fx = cone.facets() * x;
    const Vector fy = cone.facets() * y;
    int best = 0;
    double value = fx(0) / fy(0);
    for (int i = 1; i < fx.size(); ++i) {
      const double r = fx(i) / fy(i);
      if (r > value) {
        value = r;
        best = i;
      }
    }
    const Vector phi = cone.facets().row(best).transpose();
    out.value = value;
    out.witness.coords = phi / phi.dot(cone.unit());
  } else {
    const jordan::Element yis = jordan::power(cone.element(y), -0.5);
    const jordan::Element z = jordan::quadratic_apply(yis, cone.element(x));
    const jordan::SpectralDecomposition sd = jordan::spectral_decomposition(z);
    const Vector w = jordan::quadratic_apply(yis, sd.frame.back()).coords;
    out.value = sd.eigenvalues.back();
    out.witness.coords = w / w.dot(cone.unit());
  }
  if (x == y) out.value = 1.0;
  return out;
}

double m_lower(const Cone& cone, const Vector& x, const Vector& y) {
  cone.check_dim(x);
  cone.check_dim(y);
  const auto [ygap, ynorm] = gap_and_norm(cone, y);
  if (!(ynorm > 0.0)) throw DomainError("m_lower: y must be nonzero");
  if (ygap < -1e-9 * ynorm) throw DomainError("m_lower: y is outside the cone");
  const auto [xgap, xnorm] = gap_and_norm(cone, x);
  if (xgap < -1e-9 * xnorm) throw DomainError("m_lower: x is outside the cone");
  if (x == y) return 1.0;
  if (xnorm == 0.0) return 0.0;

  switch (cone.kind()) {
    case ConeKind::Orthant:
    case ConeKind::Polyhedral: {
      const Vector fx = cone.facets() * x;
      const Vector fy = cone.facets() * y;
      const double ty = 1e-12 * fy.cwiseAbs().maxCoeff();
      const double tx = 1e-12 * fx.cwiseAbs().maxCoeff();
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < fx.size(); ++i) {
        if (fy(i) > ty) {
          best = std::min(best, fx(i) / fy(i));
        } else if (fx(i) < -tx) {
          return 0.0;
        }
      }
      if (!std::isfinite(best)) throw DomainError("m_lower: y must be nonzero");
      return std::max(best, 0.0);
    }
    case ConeKind::Lorentz: {
      const int m = static_cast<int>(x.size()) - 1;
      const double x0 = x(0), y0 = y(0);
      const Vector xb = x.tail(m), yb = y.tail(m);
      // Largest a >= 0 with x - a y in C: the smaller root of
      // a^2 <y,Ry> - 2a <x,Ry> + <x,Rx>, R = diag(1, -1, ..., -1).
      const double a = std::max(y0 * y0 - yb.squaredNorm(), 0.0);
      const double b = x0 * y0 - xb.dot(yb);
      const double c = std::max(x0 * x0 - xb.squaredNorm(), 0.0);
      const double disc = std::max(b * b - a * c, 0.0);
      const double den = b + std::sqrt(disc);
      const double scale = std::max(x0 * y0, 1e-300);
      if (den > 1e-14 * scale) return std::max(c / den, 0.0);
      // x and y on the same boundary ray.
      const double t = x0 / y0;
      const Vector rest = x - t * y;
      return rest(0) - rest.tail(m).norm() >= -1e-9 * x0 ? t : 0.0;
    }
    case ConeKind::Psd: {
      const int n = cone.n();
      Eigen::SelfAdjointEigenSolver<Matrix> ey(sym::unpack(y, n));
      const double ymax = ey.eigenvalues()(n - 1);
      std::vector<int> range, null;
      for (int i = 0; i < n; ++i) {
        (ey.eigenvalues()(i) > 1e-12 * ymax ? range : null).push_back(i);
      }
      const Matrix X = ey.eigenvectors().transpose() * sym::unpack(x, n) *
                       ey.eigenvectors();
      const int r = static_cast<int>(range.size());
      const int z = static_cast<int>(null.size());
      Matrix A(r, r), B(r, z), D(z, z);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) A(i, j) = X(range[i], range[j]);
        for (int j = 0; j < z; ++j) B(i, j) = X(range[i], null[j]);
      }
      for (int i = 0; i < z; ++i)
        for (int j = 0; j < z; ++j) D(i, j) = X(null[i], null[j]);
      // Schur complement of the null-space block; X psd keeps range(B^T) in range(D).
      Matrix S = A;
      if (z > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> ed(D);
        const double dmax = std::max(ed.eigenvalues().cwiseAbs().maxCoeff(),
                                     X.cwiseAbs().maxCoeff());
        Vector inv(z);
        for (int i = 0; i < z; ++i) {
          const double l = ed.eigenvalues()(i);
          inv(i) = l > 1e-12 * dmax ? 1.0 / l : 0.0;
          // X - aY >= 0 forces B to vanish on the kernel of D; when the data
          // cannot resolve that, 0 is the only certifiable bound.
          if (inv(i) == 0.0 && (B * ed.eigenvectors().col(i)).norm() > 1e-12 * dmax) {
            return 0.0;
          }
        }
        const Matrix Dp = ed.eigenvectors() * inv.asDiagonal() *
                          ed.eigenvectors().transpose();
        S -= B * Dp * B.transpose();
      }
      Vector s(r);
      for (int i = 0; i < r; ++i) s(i) = 1.0 / std::sqrt(ey.eigenvalues()(range[i]));
      const Matrix T = s.asDiagonal() * (0.5 * (S + S.transpose())) * s.asDiagonal();
      Eigen::SelfAdjointEigenSolver<Matrix> et(T, Eigen::EigenvaluesOnly);
      return std::max(et.eigenvalues()(0), 0.0);
    }
  }
  return 0.0;
}

double order_unit_norm(const Cone& cone, const Vector& x) {
  cone.check_dim(x);
  if (cone.kind() == ConeKind::Orthant || cone.kind() == ConeKind::Polyhedral ||
      cone.unit_is_jordan_identity()) {
    return gap_and_norm(cone, x).second;
  }
  const jordan::Element yis{*cone.algebra(), cone.unit_inv_sqrt()};
  const auto b =
      jordan::spectral_bounds(jordan::quadratic_apply(yis, cone.element(x)));
  return std::max(std::abs(b.first), std::abs(b.second));
}

double order_unit_norm(const Cone& cone, const Vector& x, const Vector& u) {
  if (u == cone.unit()) return order_unit_norm(cone, x);
  cone.check_dim(x);
  require_interior(cone, u, "order unit");
  const auto b = relative_bounds(cone, x, u);
  return std::max(std::abs(b.first), std::abs(b.second));
}

Vector sample_interior(const Cone& cone, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = cone.ambient_dim();
  switch (cone.kind()) {
    case ConeKind::Orthant: {
      Vector x(d);
      for (int i = 0; i < d; ++i) x(i) = std::exp(normal(rng));
      return x;
    }
    case ConeKind::Polyhedral: {
      Vector dir(d);
      for (int i = 0; i < d; ++i) dir(i) = normal(rng);
      dir *= cone.unit().norm() / dir.norm();
      const Vector fu = cone.facets() * cone.unit();
      const Vector fd = cone.facets() * dir;
      double tmax = 3.0;
      for (int i = 0; i < fd.size(); ++i) {
        if (fd(i) < 0.0) tmax = std::min(tmax, -fu(i) / fd(i));
      }
      const Vector x = cone.unit() + 0.95 * unif(rng) * tmax * dir;
      return x * std::exp(0.5 * normal(rng));
    }
    case ConeKind::Lorentz: {
      Vector x(d);
      for (int i = 1; i < d; ++i) x(i) = normal(rng);
      x(0) = x.tail(d - 1).norm() + std::exp(normal(rng));
      return x;
    }
    case ConeKind::Psd: {
      const int n = cone.n();
      Matrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
      const Matrix x = a * a.transpose() / n +
                       (0.05 + unif(rng)) * Matrix::Identity(n, n);
      return sym::pack(x);
    }
  }
  return cone.unit();
}

Vector sample_boundary(const Cone& cone, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = cone.ambient_dim();
  switch (cone.kind()) {
    case ConeKind::Orthant: {
      Vector x = sample_interior(cone, rng);
      std::uniform_int_distribution<int> pick(0, d - 1);
      x(pick(rng)) = 0.0;
      if (d > 1 && normal(rng) > 0.5) x(pick(rng)) = 0.0;
      if (x.maxCoeff() == 0.0) x(0) = 1.0;
      return x;
    }
    case ConeKind::Polyhedral: {
      for (;;) {
        Vector dir(d);
        for (int i = 0; i < d; ++i) dir(i) = normal(rng);
        const Vector fu = cone.facets() * cone.unit();
        const Vector fd = cone.facets() * dir;
        double tmax = std::numeric_limits<double>::infinity();
        for (int i = 0; i < fd.size(); ++i) {
          if (fd(i) < 0.0) tmax = std::min(tmax, -fu(i) / fd(i));
        }
        if (std::isfinite(tmax)) return cone.unit() + tmax * dir;
      }
    }
    case ConeKind::Lorentz: {
      Vector x(d);
      for (int i = 1; i < d; ++i) x(i) = normal(rng);
      x(0) = x.tail(d - 1).norm();
      return x;
    }
    case ConeKind::Psd: {
      const int n = cone.n();
      const int rank = n == 1 ? 0 : 1 + static_cast<int>(rng() % (n - 1));
      Matrix a(n, std::max(rank, 1));
      for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a(i, j) = rank == 0 ? 0.0 : normal(rng);
      return sym::pack(a * a.transpose());
    }
  }
  return cone.unit();
}

}  // namespace conegeo
