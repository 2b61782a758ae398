#pragma once

#include <stdexcept>
#include <string>

namespace hrtlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The window's L2 norm is numerically zero; it cannot be normalized.
class ZeroWindow : public Error {
 public:
  using Error::Error;
};

/// Malformed window description (bad grid, empty coefficient list, ...).
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature exhausted its panel budget before reaching the
/// requested absolute tolerance.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// Two configuration points coincide (within the geometry tolerance).
class DuplicatePoint : public Error {
 public:
  DuplicatePoint(const std::string& what, std::size_t i, std::size_t j)
      : Error(what), first(i), second(j) {}
  std::size_t first;
  std::size_t second;
};

/// Normal-form construction received coincident anchor points.
class DegenerateConfig : public Error {
 public:
  using Error::Error;
};

/// A (1,n) normal form was requested for a configuration that is not one.
class NotOneN : public Error {
 public:
  using Error::Error;
};

/// The base Gramian is not positive definite at working tolerance.
class SingularBase : public Error {
 public:
  using Error::Error;
};

/// The window's decay metadata cannot certify an integral tail below the
/// requested tolerance.
class TailBoundTooLarge : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition (real window, specific base, ...) fails.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

}  // namespace hrtlab
