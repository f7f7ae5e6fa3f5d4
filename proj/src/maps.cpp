#include "conegeo/maps.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "conegeo/sym_layout.hpp"

namespace conegeo {

namespace {

constexpr std::uint64_t kVerifySeed = 0x9e3779b97f4a7c15ULL;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Sampled check that f maps C into C and C° into C°.
template <class F>
void verify_invariance(const Cone& cone, F&& f, const char* what) {
  std::mt19937_64 rng(kVerifySeed);
  for (int t = 0; t < 256; ++t) {
    const Vector x = sample_interior(cone, rng);
    if (!is_interior(cone, f(x))) {
      throw DomainError(std::string(what) + " does not map the interior into itself");
    }
  }
  for (int t = 0; t < 64; ++t) {
    const Vector x = sample_boundary(cone, rng);
    if (!in_cone(cone, f(x))) {
      throw DomainError(std::string(what) + " does not map the cone into itself");
    }
  }
}

Vector apply_topical(const TopicalMap& t, const Vector& x) {
  Vector y(static_cast<int>(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (const MinGroup& g : t.rows[i]) {
      double lo = std::numeric_limits<double>::infinity();
      for (const Vector& w : g) lo = std::min(lo, w.dot(x));
      best = std::max(best, lo);
    }
    y(static_cast<int>(i)) = best;
  }
  return y;
}

}  // namespace

GaugeSpec GaugeSpec::functional(Vector phi) {
  return {Kind::DualFunctional, std::move(phi)};
}

GaugeSpec GaugeSpec::order_unit(std::optional<Vector> u) {
  return {Kind::OrderUnitNorm, u ? std::move(*u) : Vector()};
}

double GaugeSpec::operator()(const Cone& cone, const Vector& x) const {
  if (kind == Kind::DualFunctional) {
    cone.check_dim(coords, "gauge functional");
    return coords.dot(x);
  }
  if (coords.size() == 0) return order_unit_norm(cone, x);
  return order_unit_norm(cone, x, coords);
}

const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Linear:
      return "linear";
    case MapKind::Congruence:
      return "congruence";
    case MapKind::Topical:
      return "topical";
    case MapKind::Perturbed:
      return "perturbed";
    case MapKind::Normalized:
      return "normalized";
  }
  return "?";
}

Map Map::linear(const Cone& cone, Matrix a) {
  const int d = cone.ambient_dim();
  if (a.rows() != d || a.cols() != d) {
    throw DimensionError("linear map: matrix must be " + std::to_string(d) +
                         "x" + std::to_string(d));
  }
  if (cone.kind() == ConeKind::Orthant) {
    if (a.minCoeff() < 0.0) {
      throw DomainError("linear map on the orthant needs nonnegative entries");
    }
    for (int i = 0; i < d; ++i) {
      if (!(a.row(i).maxCoeff() > 0.0)) {
        throw DomainError("linear map: row " + std::to_string(i) +
                          " is zero, interior is not preserved");
      }
    }
  } else {
    verify_invariance(cone, [&](const Vector& x) -> Vector { return a * x; },
                      "linear map");
  }
  return Map(cone, LinearMap{std::move(a)});
}

Map Map::congruence(const Cone& cone, Matrix m) {
  if (cone.kind() != ConeKind::Psd) {
    throw DimensionError("congruence maps need a psd cone");
  }
  if (m.rows() != cone.n() || m.cols() != cone.n()) {
    throw DimensionError("congruence map: matrix must be " +
                         std::to_string(cone.n()) + "x" + std::to_string(cone.n()));
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-14 * s(0))) {
    throw DomainError("congruence map: singular matrix does not preserve the interior");
  }
  return Map(cone, CongruenceMap{std::move(m)});
}

Map Map::topical(const Cone& cone, std::vector<TopicalRow> rows) {
  if (cone.kind() != ConeKind::Orthant) {
    throw DimensionError("topical maps are defined on the orthant");
  }
  const int d = cone.ambient_dim();
  if (static_cast<int>(rows.size()) != d) {
    throw DimensionError("topical map: expected " + std::to_string(d) + " rows");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) throw DomainError("topical map: empty row");
    for (const MinGroup& g : rows[i]) {
      if (g.empty()) throw DomainError("topical map: empty min-group");
      for (const Vector& w : g) {
        if (w.size() != d) throw DimensionError("topical map: form has wrong length");
        if (w.minCoeff() < 0.0 || !(w.maxCoeff() > 0.0)) {
          throw DomainError("topical map: forms must be nonnegative and nonzero");
        }
      }
    }
  }
  return Map(cone, TopicalMap{std::move(rows)});
}

Map Map::perturbed(const Map& inner, double eps, std::optional<Vector> u) {
  if (!(eps > 0.0)) throw DomainError("perturbed map: eps must be positive");
  Vector unit = u ? std::move(*u) : inner.cone().unit();
  inner.cone().check_dim(unit, "perturbation unit");
  if (!is_interior(inner.cone(), unit)) {
    throw DomainError("perturbed map: u must be interior");
  }
  return Map(inner.cone(),
             PerturbedMap{std::make_shared<const Map>(inner), eps, std::move(unit)});
}

Map Map::normalized(const Map& inner, GaugeSpec gauge) {
  const Cone& cone = inner.cone();
  if (gauge.kind == GaugeSpec::Kind::DualFunctional) {
    cone.check_dim(gauge.coords, "gauge functional");
    std::mt19937_64 rng(kVerifySeed);
    for (int t = 0; t < 64; ++t) {
      if (!(gauge.coords.dot(sample_boundary(cone, rng)) > 0.0)) {
        throw DomainError("gauge functional is not strictly positive on the cone");
      }
    }
  } else if (gauge.coords.size() > 0) {
    cone.check_dim(gauge.coords, "gauge unit");
    if (!is_interior(cone, gauge.coords)) {
      throw DomainError("gauge unit must be interior");
    }
  }
  return Map(cone, NormalizedMap{std::make_shared<const Map>(inner), std::move(gauge)});
}

Map Map::identity(const Cone& cone) {
  return Map(cone, LinearMap{Matrix::Identity(cone.ambient_dim(), cone.ambient_dim())});
}

MapKind Map::kind() const {
  return std::visit(overloaded{
                        [](const LinearMap&) { return MapKind::Linear; },
                        [](const CongruenceMap&) { return MapKind::Congruence; },
                        [](const TopicalMap&) { return MapKind::Topical; },
                        [](const PerturbedMap&) { return MapKind::Perturbed; },
                        [](const NormalizedMap&) { return MapKind::Normalized; },
                    },
                    data_);
}

Vector Map::apply(const Vector& x) const {
  cone_.check_dim(x);
  const MapKind k = kind();
  if ((k == MapKind::Perturbed || k == MapKind::Normalized) &&
      !is_interior(cone_, x)) {
    throw DomainError(std::string(to_string(k)) + " map needs an interior point");
  }
  return apply_extended(x);
}

Vector Map::apply_extended(const Vector& x) const {
  return std::visit(
      overloaded{
          [&](const LinearMap& m) -> Vector { return m.a * x; },
          [&](const CongruenceMap& m) -> Vector {
            return sym::pack(m.m * sym::unpack(x, cone_.n()) * m.m.transpose());
          },
          [&](const TopicalMap& m) -> Vector { return apply_topical(m, x); },
          [&](const PerturbedMap& m) -> Vector {
            const double nx = order_unit_norm(cone_, x, m.u);
            return m.inner->apply_extended(x) + (m.eps * nx) * m.u;
          },
          [&](const NormalizedMap& m) -> Vector {
            const Vector y = m.inner->apply_extended(x);
            const double q = m.gauge(cone_, y);
            if (!(q > 0.0) || !std::isfinite(q)) {
              throw DomainError("normalized map: gauge of the image is not positive");
            }
            return y / q;
          },
      },
      data_);
}

Map Map::scaled(double s) const {
  if (!(s > 0.0)) throw DomainError("scaled: factor must be positive");
  return std::visit(
      overloaded{
          [&](const LinearMap& m) { return Map(cone_, LinearMap{s * m.a}); },
          [&](const CongruenceMap& m) {
            return Map(cone_, CongruenceMap{std::sqrt(s) * m.m});
          },
          [&](const TopicalMap& m) {
            TopicalMap t = m;
            for (auto& row : t.rows)
              for (auto& g : row)
                for (auto& w : g) w *= s;
            return Map(cone_, std::move(t));
          },
          [&](const PerturbedMap& m) {
            return Map(cone_, PerturbedMap{std::make_shared<const Map>(m.inner->scaled(s)),
                                           s * m.eps, m.u});
          },
          [&](const NormalizedMap&) { return *this; },
      },
      data_);
}

RadialResult radial_extension(const Map& f, const Vector& x,
                              const std::vector<double>& schedule) {
  const Cone& cone = f.cone();
  cone.check_dim(x);
  if (!in_cone(cone, x)) throw DomainError("radial_extension: x is outside the cone");
  if (schedule.size() < 2) throw Error("radial_extension: schedule needs two entries");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
      throw Error("radial_extension: schedule must be strictly decreasing and positive");
    }
  }

  std::vector<Vector> values;
  for (double eps : schedule) values.push_back(f.apply(x + eps * cone.unit()));

  const std::size_t n = values.size();
  const double scale = std::max(1.0, order_unit_norm(cone, values[n - 1]));
  const double d_last = order_unit_norm(cone, values[n - 1] - values[n - 2]);
  bool converged = d_last <= 1e-8 * scale;
  if (!converged && n >= 3) {
    const double d_prev = order_unit_norm(cone, values[n - 2] - values[n - 3]);
    const double shrink =
        (schedule[n - 2] - schedule[n - 1]) / (schedule[n - 3] - schedule[n - 2]);
    converged = d_last <= 1.5 * shrink * d_prev + 1e-14 * scale;
  }

  RadialResult out{values[n - 1], converged, d_last};
  try {
    Vector direct = f.apply_extended(x);
    if (direct.allFinite()) {
      // The last evaluation sits about eps_n/(eps_{n-1}-eps_n) steps from the limit.
      const double gap = order_unit_norm(cone, direct - values[n - 1]);
      const double allowed =
          2.0 * d_last * schedule[n - 1] / (schedule[n - 2] - schedule[n - 1]) +
          1e-8 * scale;
      if (gap > allowed) out.converged = false;
      out.value = std::move(direct);
    }
  } catch (const DomainError&) {
  }
  return out;
}

Vector iterate(const Map& f, const Vector& x, int k) {
  Vector y = x;
  for (int i = 0; i < k; ++i) y = f.apply(y);
  return y;
}

}  // namespace conegeo
