#pragma once

#include <stdexcept>
#include <string>

namespace cvswap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape, label or index problems: the input cannot describe what was asked.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Invalid or incomplete physical configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Floating-point failure: non-finite input, singular system, failed solver.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Drift matrix has an eigenvalue with non-negative real part.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double max_real_part)
      : Error(what), max_real_part_(max_real_part) {}
  double max_real_part() const noexcept { return max_real_part_; }

 private:
  double max_real_part_;
};

class NonconvergenceError : public NumericError {
 public:
  NonconvergenceError(const std::string& what, double last_residual)
      : NumericError(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// The measured 2x2 covariance Gamma is (numerically) singular.
class MeasurementDegeneracyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvswap
