#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace datacurv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (bad token, inconsistent arity, empty file).
class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The cloud has fewer than two distinct points, so no density radius exists.
class DegenerateCloud : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CholeskyFailure : public Error {
 public:
  using Error::Error;
};

/// Per-point outcome of dimension/curvature estimation. The string forms
/// returned by to_string() appear in CLI output and must stay stable.
enum class PointStatus {
  ok,
  empty_neighborhood,
  zero_dimension,
  no_normal_direction,
  underdetermined_fit,
  singular_system,
  eigensolver_failure,
};

std::string_view to_string(PointStatus status) noexcept;

/// Raised by the per-point estimation stages. The pipeline turns these into
/// PointRecord statuses instead of aborting a run.
class EstimationError : public Error {
 public:
  EstimationError(PointStatus status, const std::string& what)
      : Error(what), status_(status) {}

  PointStatus status() const noexcept { return status_; }

 private:
  PointStatus status_;
};

}  // namespace datacurv
