#pragma once

// Funk, reverse Funk, Thompson and Hilbert metrics on the interior of a cone.
// Values whose logarithm would exceed 700 are reported as +infinity.

#include "conegeo/cone.hpp"

namespace conegeo {

enum class MetricKind { Funk, RFunk, Thompson, Hilbert };

const char* to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& s);

/// log M(x/y). x, y interior.
double funk(const Cone& cone, const Vector& x, const Vector& y);

/// log M(y/x). x interior, y in C \ {0}.
double rfunk(const Cone& cone, const Vector& x, const Vector& y);

/// max(funk(x, y), funk(y, x)).
double thompson(const Cone& cone, const Vector& x, const Vector& y);

/// funk(x, y) + rfunk(x, y); projectively invariant.
double hilbert(const Cone& cone, const Vector& x, const Vector& y);

double distance(MetricKind kind, const Cone& cone, const Vector& x,
                const Vector& y);

/// Hilbert's metric as the log cross-ratio of the chord through x and y on the
/// slice {phi(z) = 1}, phi the sum of the unit facet functionals (all-ones on
/// the orthant). Orthant and polyhedral cones only.
double cross_ratio_hilbert(const Cone& cone, const Vector& x, const Vector& y);

}  // namespace conegeo
