#pragma once

#include <stdexcept>
#include <string>

namespace ktflag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands come from lattices of different rank.
class RankMismatch : public Error {
 public:
  using Error::Error;
};

/// A division that was required to be exact left a remainder.
class InexactDivision : public Error {
 public:
  using Error::Error;
};

/// Integer coefficient left the int64 range.
class CoefficientOverflow : public Error {
 public:
  using Error::Error;
};

class UnsupportedType : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of the operation (index out of range,
/// element not a minimal coset representative, mismatched spaces, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace ktflag
