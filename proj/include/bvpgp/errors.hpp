#pragma once

#include <stdexcept>
#include <string>

namespace bvpgp {

// Bad inputs or contract violations. The CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown during factorization or optimization. Exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PointOutsideDomain : ValidationError {
  explicit PointOutsideDomain(long index)
      : ValidationError("point at row " + std::to_string(index) +
                        " lies outside the domain box"),
        index(index) {}
  long index;
};

struct NonFiniteValue : ValidationError {
  using ValidationError::ValidationError;
};

struct EmptyDataset : ValidationError {
  EmptyDataset() : ValidationError("dataset has no rows") {}
};

struct LengthMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct ZeroReference : ValidationError {
  ZeroReference() : ValidationError("reference vector has zero norm") {}
};

struct InvalidOrder : ValidationError {
  using ValidationError::ValidationError;
};

struct InvalidCount : ValidationError {
  using ValidationError::ValidationError;
};

struct DimMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct KindUnsupportedByKernel : ValidationError {
  using ValidationError::ValidationError;
};

struct UnsupportedOperator : ValidationError {
  using ValidationError::ValidationError;
};

struct UnknownProblem : ValidationError {
  explicit UnknownProblem(const std::string& name)
      : ValidationError("unknown manufactured problem: " + name) {}
};

struct IoError : ValidationError {
  using ValidationError::ValidationError;
};

struct CholeskyFailure : NumericalError {
  CholeskyFailure(long pivot_index, double pivot_value)
      : NumericalError("Cholesky factorization failed at pivot " +
                       std::to_string(pivot_index) + " (value " +
                       std::to_string(pivot_value) +
                       "); the covariance is not numerically SPD, sigma2 may "
                       "be too small"),
        pivot_index(pivot_index),
        pivot_value(pivot_value) {}
  long pivot_index;
  double pivot_value;
};

struct ZFactorizationFailure : NumericalError {
  using NumericalError::NumericalError;
};

struct NoiseFloorViolation : NumericalError {
  using NumericalError::NumericalError;
};

struct AllRestartsFailed : NumericalError {
  AllRestartsFailed()
      : NumericalError("every training restart diverged or evaluated to "
                       "+inf; no usable optimum") {}
};

}  // namespace bvpgp
