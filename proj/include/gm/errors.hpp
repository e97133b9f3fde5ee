#pragma once

#include <stdexcept>

namespace gm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed files, out-of-range ids, invariant violations on user input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An algorithm was invoked outside its contract (e.g. percolation with no
/// prior, sparse assignment with no perfect matching).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown inside a solver.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gm
