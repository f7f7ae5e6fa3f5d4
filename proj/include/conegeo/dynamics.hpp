#pragma once

// Orbits of order-preserving homogeneous maps: raw (Thompson mode) and
// gauge-normalized (Hilbert mode) iteration, omega-limit clustering,
// separating functionals for boundary limit sets, and Denjoy-Wolff reports.

#include <optional>
#include <string>
#include <vector>

#include "conegeo/horo.hpp"
#include "conegeo/spectral.hpp"

namespace conegeo {

enum class OrbitMode { Thompson, Hilbert };

const char* to_string(OrbitMode mode);
OrbitMode orbit_mode_from_string(const std::string& s);

struct OrbitStep {
  int k = 0;
  /// Thompson mode: x_k / ||x_k||_u. Hilbert mode: the normalized iterate.
  Vector point;
  /// Thompson mode: log ||x_k||_u, so x_k = exp(log_gauge) * point.
  /// Hilbert mode: sum of log q(f(x_j)) for j < k.
  double log_gauge = 0.0;
  /// Distances from the previous iterate; empty at k = 0 or when either
  /// point is not numerically interior.
  std::optional<double> thompson_step;
  std::optional<double> hilbert_step;
  double interior_gap = 0.0;
  std::optional<double> h_f;
  std::optional<double> h_r;
  std::optional<double> h_h;
};

struct OrbitOptions {
  /// Record every stride-th iterate (plus the first and last).
  int stride = 1;
  /// Evaluated at each recorded interior point, filed by kind.
  std::vector<Horofunction> horo;
};

struct OrbitTrace {
  OrbitMode mode = OrbitMode::Thompson;
  Cone cone;
  int k_max = 0;
  int stride = 1;
  std::vector<OrbitStep> steps;
  bool truncated = false;
  std::string truncation_reason;
};

/// In Hilbert mode f must be a Normalized map.
OrbitTrace iterate_orbit(const Map& f, const Vector& x0, int k_max, OrbitMode mode,
                         const OrbitOptions& opts = {});

struct Cluster {
  Vector representative;
  /// Indices into OrbitTrace::steps.
  std::vector<int> members;
  double radius = 0.0;
};

struct OmegaReport {
  OrbitMode mode = OrbitMode::Thompson;
  std::vector<Cluster> clusters;
  bool all_boundary = false;
  std::optional<DualFunctional> separating_functional;
  bool hull_in_boundary = false;
  /// Interior point at which the separating functional is checked positive.
  Vector interior_witness;
  std::string note;
};

/// Greedy eps-net over the last tail_fraction of the recorded points (scaled
/// to ||.||_u = 1), seeded from the final point backwards.
OmegaReport omega_limit(const OrbitTrace& trace, double tail_fraction = 0.5,
                        double cluster_radius = 1e-4);

/// A positive functional vanishing on every point: sum of the vanishing
/// facets (orthant, polyhedral), the projector onto the common kernel (PSD),
/// or the sum of the tangent functionals (Lorentz). Empty when none exists
/// or the result fails |phi(xi)| <= 1e-6 |phi| |xi|, phi(u) > 0.
std::optional<DualFunctional> fit_separating_functional(
    const Cone& cone, const std::vector<Vector>& points);

/// 1000 random convex combinations all have relative interior gap <= 1e-6.
bool hull_in_boundary(const Cone& cone, const std::vector<Vector>& points,
                      std::uint64_t seed = 7);

/// Bounded: pre-compact orbit. Unbounded: log-gauge tends to infinity.
enum class Regime { Bounded, Unbounded, Undetermined };

const char* to_string(Regime r);

struct RegimeInfo {
  Regime regime = Regime::Undetermined;
  double span = 0.0;
  /// G(K) - G(K/2), G(K/2) - G(K/4), G(K/4) - G(K/8) for the log-gauge G.
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

/// Classifies a Thompson-mode trace by its log-gauge sequence.
RegimeInfo classify_regime(const OrbitTrace& trace);

struct DwOptions {
  int k_max = 10000;
  int stride = 1;
  double tail_fraction = 0.5;
  double cluster_radius = 1e-4;
  SpectralOptions spectral;
};

struct StartReport {
  Vector x0;
  OmegaReport thompson;
  OmegaReport hilbert;
  RegimeInfo regime;
  bool truncated = false;
};

struct DwReport {
  /// False when f has an interior eigenvector; nothing else is filled then.
  bool hypotheses_met = false;
  std::string message;
  SpectralReport spectral;
  std::vector<StartReport> starts;
  /// Fitted on the union of all cluster representatives.
  std::optional<DualFunctional> common_functional;
  bool all_boundary = false;
  bool hull_in_boundary = false;
};

/// Runs the spectral radius, rescales f to r = 1 and iterates every start in
/// both modes (concurrently across starts).
DwReport denjoy_wolff_report(const Map& f, const GaugeSpec& gauge,
                             const std::vector<Vector>& starts,
                             const DwOptions& opts = {});

struct DichotomyReport {
  bool polyhedral = false;
  RegimeInfo regime;
  /// Late points whose log-gauge stays below the early maximum.
  int bounded_tail_points = 0;
  bool bounded_accumulation = false;
  std::optional<Vector> accumulation_point;
  bool violation = false;
};

/// Flags an orbit that is both unbounded and has a bounded subsequence
/// accumulating at a boundary point. Runs on any cone; the no-violation
/// guarantee holds for polyhedral ones.
DichotomyReport polyhedral_dichotomy_check(const Map& f, const Vector& x0, int k_max,
                                           int stride = 1);

}  // namespace conegeo
