#pragma once

#include <stdexcept>
#include <string>

namespace gmkdv {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// F(., q) has no root in the requested bracket.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// The amplitude-velocity coupling has no admissible solution.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

/// gamma + alpha^2 V <= 0 at the computed velocity.
class ViolatedConditionError : public Error {
 public:
  using Error::Error;
};

class StagnationError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

class DomainTooSmallError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public Error {
 public:
  using Error::Error;
};

/// Non-fatal conditions; runs record them and carry on.
enum class WarningKind {
  kDivergence,         ///< iterates of a step stopped contracting
  kOverlap,            ///< initial waves overlap above the threshold
  kBoundarySmallness,  ///< solution not small next to the boundary
  kStability,          ///< mesh outside the advisory step restriction
};

inline const char* to_string(WarningKind kind) {
  switch (kind) {
    case WarningKind::kDivergence: return "divergence";
    case WarningKind::kOverlap: return "overlap";
    case WarningKind::kBoundarySmallness: return "boundary";
    case WarningKind::kStability: return "stability";
  }
  return "unknown";
}

struct Warning {
  WarningKind kind;
  std::string message;
};

}  // namespace gmkdv
