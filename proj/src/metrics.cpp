#include "conegeo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conegeo {

namespace {

constexpr double kLogCap = 700.0;

double capped_log(double ratio) {
  if (!(ratio > 0.0)) {
    throw DomainError("order ratio is not positive; point lies outside the cone");
  }
  const double v = std::log(ratio);
  return v > kLogCap ? std::numeric_limits<double>::infinity() : v;
}

void require_interior(const Cone& cone, const Vector& x, const char* what) {
  if (!is_interior(cone, x)) {
    throw DomainError(std::string(what) + " must be interior");
  }
}

}  // namespace

const char* to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Funk:
      return "funk";
    case MetricKind::RFunk:
      return "rfunk";
    case MetricKind::Thompson:
      return "thompson";
    case MetricKind::Hilbert:
      return "hilbert";
  }
  return "?";
}

MetricKind metric_kind_from_string(const std::string& s) {
  if (s == "funk") return MetricKind::Funk;
  if (s == "rfunk") return MetricKind::RFunk;
  if (s == "thompson") return MetricKind::Thompson;
  if (s == "hilbert") return MetricKind::Hilbert;
  throw Error("unknown metric kind '" + s + "'");
}

double funk(const Cone& cone, const Vector& x, const Vector& y) {
  require_interior(cone, x, "funk: x");
  return capped_log(m_ratio_value(cone, x, y));
}

double rfunk(const Cone& cone, const Vector& x, const Vector& y) {
  if (order_unit_norm(cone, y) == 0.0) throw DomainError("rfunk: y must be nonzero");
  if (!in_cone(cone, y)) throw DomainError("rfunk: y is outside the cone");
  return capped_log(m_ratio_value(cone, y, x));
}

double thompson(const Cone& cone, const Vector& x, const Vector& y) {
  return std::max(funk(cone, x, y), funk(cone, y, x));
}

double hilbert(const Cone& cone, const Vector& x, const Vector& y) {
  return funk(cone, x, y) + funk(cone, y, x);
}

double distance(MetricKind kind, const Cone& cone, const Vector& x,
                const Vector& y) {
  switch (kind) {
    case MetricKind::Funk:
      return funk(cone, x, y);
    case MetricKind::RFunk:
      return rfunk(cone, x, y);
    case MetricKind::Thompson:
      return thompson(cone, x, y);
    case MetricKind::Hilbert:
      return hilbert(cone, x, y);
  }
  return 0.0;
}

double cross_ratio_hilbert(const Cone& cone, const Vector& x, const Vector& y) {
  if (cone.kind() != ConeKind::Orthant && cone.kind() != ConeKind::Polyhedral) {
    throw Error("cross_ratio_hilbert: only orthant and polyhedral cones");
  }
  require_interior(cone, x, "cross_ratio_hilbert: x");
  require_interior(cone, y, "cross_ratio_hilbert: y");

  const Vector slice = cone.facets().colwise().sum().transpose();
  const Vector xs = x / slice.dot(x);
  const Vector ys = y / slice.dot(y);
  const Vector d = ys - xs;
  if (d.norm() <= 1e-14 * xs.norm()) {
    throw DomainError("cross_ratio_hilbert: x and y are proportional");
  }

  // Chord xs + t d hits the boundary at t_minus < 0 (beyond x) and
  // t_plus > 1 (beyond y).
  const Vector fx = cone.facets() * xs;
  const Vector fd = cone.facets() * d;
  double t_plus = std::numeric_limits<double>::infinity();
  double t_minus = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < fx.size(); ++i) {
    if (fd(i) < 0.0) t_plus = std::min(t_plus, -fx(i) / fd(i));
    if (fd(i) > 0.0) t_minus = std::max(t_minus, -fx(i) / fd(i));
  }
  // |x'-y| |y'-x| / (|x'-x| |y'-y|) with parameters 0 (x), 1 (y).
  const double num = (1.0 - t_minus) * t_plus;
  const double den = (-t_minus) * (t_plus - 1.0);
  if (!std::isfinite(num)) {
    // One endpoint at infinity: the matching factors cancel.
    const double a = std::isfinite(t_plus) ? t_plus / (t_plus - 1.0) : 1.0;
    const double b = std::isfinite(t_minus) ? (1.0 - t_minus) / (-t_minus) : 1.0;
    return std::log(a * b);
  }
  return std::log(num / den);
}

}  // namespace conegeo
