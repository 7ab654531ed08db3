#pragma once

#include <stdexcept>
#include <string>

namespace fsv {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A point lies outside the closed domain.
class DomainError : public Error {
  using Error::Error;
};

/// An exponent value violates 1 < e < inf.
class InvalidExponentError : public Error {
  using Error::Error;
};

/// Grid construction failed (empty domain, misaligned holes, bad resolution).
class GridError : public Error {
  using Error::Error;
};

/// A numeric evaluation met a non-finite input.
class EvaluationError : public Error {
  using Error::Error;
};

/// A parameter is outside its admissible range (e.g. s outside (0,1)).
class ParameterError : public Error {
  using Error::Error;
};

/// A candidate function fails the admissibility constraint u >= 1 on the target set.
class AdmissibilityError : public Error {
  using Error::Error;
};

/// Caller misuse: mismatched grids, malformed masks, bad argument combinations.
class UsageError : public Error {
  using Error::Error;
};

}  // namespace fsv
