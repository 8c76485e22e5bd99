#pragma once

#include <stdexcept>
#include <string>

namespace hlpareto {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when a gradient is requested at a point where the function has a
/// kink (e.g. a Chebyshev tie).
class NotDifferentiable : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf in an iterate, failed factorization, or a root finder that ran out
/// of iterations.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class EmptyReference : public Error {
 public:
  using Error::Error;
};

/// The scalarization gap left its certified interval. Carries both sides so
/// callers can report how far off the certificate was.
class CertificationFailure : public Error {
 public:
  CertificationFailure(const std::string& what, double gap, double lower,
                       double upper)
      : Error(what), gap_(gap), lower_(lower), upper_(upper) {}

  double gap() const { return gap_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double gap_;
  double lower_;
  double upper_;
};

}  // namespace hlpareto
