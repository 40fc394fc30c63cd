#pragma once

#include <stdexcept>
#include <string>

namespace zk {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested enumeration exceeds the practical size guard.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// (z, z', xi) does not belong to any series giving a probability measure.
class InvalidParameters : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole of the gamma function.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Sampler or quadrature configured so that the requested guarantee cannot hold.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach its target accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double attained)
      : Error(what + " (attained " + std::to_string(attained) + ")"), attained_(attained) {}

  double attained() const noexcept { return attained_; }

 private:
  double attained_;
};

}  // namespace zk
