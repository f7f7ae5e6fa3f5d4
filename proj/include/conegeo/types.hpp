#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace conegeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input has the wrong ambient dimension or algebra.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point that must be (numerically) interior, or inside the cone, is not.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iteration or limit did not settle within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace conegeo
