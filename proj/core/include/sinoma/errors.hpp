#pragma once

#include <stdexcept>
#include <string>

namespace sinoma {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A least-squares system whose design matrix is numerically rank deficient.
class RankDeficient : public Error {
 public:
  RankDeficient(const std::string& what, double condition)
      : Error(what), condition_(condition) {}

  /// Ratio largest / smallest singular value (infinity for an exact zero).
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// The frequency estimator could not produce an answer for this observation.
class EstimationFailure : public Error {
 public:
  using Error::Error;
};

/// A gain row contains a zero entry, so its logarithm is undefined.
class DegenerateGain : public Error {
 public:
  using Error::Error;
};

/// The phase of a gain row cannot be resolved (vanishing resultant or pilot).
class PhaseAmbiguous : public Error {
 public:
  using Error::Error;
};

}  // namespace sinoma
