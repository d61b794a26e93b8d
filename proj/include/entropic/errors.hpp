#pragma once

#include <stdexcept>
#include <string>

namespace entropic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different ambient spaces F_2^n.
class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// A dense table, an enumeration or a joint would exceed the configured caps.
class CapacityError : public Error {
  public:
    using Error::Error;
};

class EmptySupportError : public Error {
  public:
    using Error::Error;
};

/// Conditioning on an event of probability zero.
class ConditioningError : public Error {
  public:
    using Error::Error;
};

/// Malformed input: bad JSON, non-RREF basis, unnormalized masses, bad ranges.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A subspace search exhausted its strategy without meeting the requested bounds.
class SearchFailure : public Error {
  public:
    using Error::Error;
};

/// A lemma was invoked on inputs that do not satisfy its hypotheses.
class HypothesisViolation : public Error {
  public:
    HypothesisViolation(const std::string& what, double gap) : Error(what), gap_(gap) {}
    double gap() const noexcept { return gap_; }

  private:
    double gap_;
};

}  // namespace entropic
