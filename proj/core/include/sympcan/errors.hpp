#pragma once

#include <stdexcept>
#include <string>

namespace sympcan {

// Base class for all library errors. Nothing in the library aborts; every
// failure surfaces as one of the types below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (wrong shape, not symmetric,
// singular skew part, bad parameter, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized input (JSON shape, entry syntax, unknown field tag).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A floating computation could not be resolved decisively (eigenvalue
// clustering, rank gaps, sign extraction), or structural cross-checks failed.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

// Exact backends only support spectra that split over the Gaussian rationals;
// anything else is rejected with this error.
class UnsupportedSpectrumError : public Error {
 public:
  using Error::Error;
};

}  // namespace sympcan
