#pragma once

#include <stdexcept>
#include <string>

namespace proxylab {

/// Base for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad argument shape or value (length mismatch, too few observations, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf entered a moment computation.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A regressor has (numerically) zero sample variance.
class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

/// Two regressors are (numerically) perfectly collinear.
class CollinearityError : public Error {
 public:
  using Error::Error;
};

/// Design matrix is rank deficient.
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// DGP or run configuration violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A moment matrix in the cointegration eigenproblem is numerically singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// CSV / config file ingestion failure; message carries row context.
class IngestError : public Error {
 public:
  using Error::Error;
};

}  // namespace proxylab
