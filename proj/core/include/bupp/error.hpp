#pragma once

#include <stdexcept>
#include <string>

namespace bupp {

/// Precondition violated by the caller (bad masses, out-of-range value, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two objects that must share a value lattice do not.
class LatticeMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// An exhaustive computation would exceed its configured size limit.
class SearchSpaceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace bupp
