#pragma once

// Order-preserving homogeneous self-maps of a cone interior.

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "conegeo/cone.hpp"

namespace conegeo {

/// Continuous homogeneous gauge q: C° -> (0, inf).
struct GaugeSpec {
  enum class Kind { DualFunctional, OrderUnitNorm };
  Kind kind = Kind::OrderUnitNorm;
  /// phi for DualFunctional, u for OrderUnitNorm (empty: the cone's unit).
  Vector coords;

  static GaugeSpec functional(Vector phi);
  static GaugeSpec order_unit(std::optional<Vector> u = std::nullopt);

  double operator()(const Cone& cone, const Vector& x) const;
};

enum class MapKind { Linear, Congruence, Topical, Perturbed, Normalized };

const char* to_string(MapKind kind);

/// Topical row: max over groups of (min over the group's nonnegative forms).
using MinGroup = std::vector<Vector>;
using TopicalRow = std::vector<MinGroup>;

class Map;

struct LinearMap {
  Matrix a;
};
/// X -> M X M^T on a Psd cone.
struct CongruenceMap {
  Matrix m;
};
struct TopicalMap {
  std::vector<TopicalRow> rows;
};
/// f(x) + eps ||x||_u u.
struct PerturbedMap {
  std::shared_ptr<const Map> inner;
  double eps = 0.0;
  Vector u;
};
/// f(x) / q(f(x)).
struct NormalizedMap {
  std::shared_ptr<const Map> inner;
  GaugeSpec gauge;
};

class Map {
 public:
  /// Verifies cone invariance (exactly on the orthant, by sampling otherwise).
  static Map linear(const Cone& cone, Matrix a);
  static Map congruence(const Cone& cone, Matrix m);
  /// Orthant only; every form must be nonnegative and nonzero.
  static Map topical(const Cone& cone, std::vector<TopicalRow> rows);
  static Map perturbed(const Map& inner, double eps,
                       std::optional<Vector> u = std::nullopt);
  static Map normalized(const Map& inner, GaugeSpec gauge);
  static Map identity(const Cone& cone);

  MapKind kind() const;
  const Cone& cone() const { return cone_; }
  const auto& data() const { return data_; }

  /// Perturbed and Normalized maps require an interior x; the others accept
  /// any x in C.
  Vector apply(const Vector& x) const;

  /// Continuous extension to the boundary for every kind (Normalized throws
  /// when the inner image has zero gauge).
  Vector apply_extended(const Vector& x) const;

  /// s * f.
  Map scaled(double s) const;

 private:
  Map(Cone cone, std::variant<LinearMap, CongruenceMap, TopicalMap,
                              PerturbedMap, NormalizedMap>
                     data)
      : cone_(std::move(cone)), data_(std::move(data)) {}

  Cone cone_;
  std::variant<LinearMap, CongruenceMap, TopicalMap, PerturbedMap, NormalizedMap>
      data_;
};

struct RadialResult {
  Vector value;
  bool converged = false;
  /// Order-unit distance between the last two schedule evaluations.
  double last_step = 0.0;
};

/// f^(x) = lim_{eps -> 0+} f(x + eps u). The schedule evaluations certify the
/// limit: successive differences must shrink in proportion to the schedule
/// gaps (or fall below 1e-8 relative). The returned value is the direct
/// boundary evaluation when it exists, else the last schedule value.
RadialResult radial_extension(const Map& f, const Vector& x,
                              const std::vector<double>& schedule = {1e-4, 1e-6,
                                                                     1e-8});

/// f^k(x) by repeated application.
Vector iterate(const Map& f, const Vector& x, int k);

}  // namespace conegeo
