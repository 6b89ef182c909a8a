// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_ERRORS_HPP
#define MAGBLOCH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace magbloch
{

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: bad coefficient spec, invalid grid sizes, mode mismatch.
class InvalidInput : public Error
{
public:
  using Error::Error;
};

// The constant field does not carry an integer flux through the unit cell.
class FluxQuantizationError : public InvalidInput
{
public:
  using InvalidInput::InvalidInput;
};

// Iterative eigensolver failed to reach the requested tolerance.
class SolverError : public Error
{
public:
  SolverError(const std::string &what, std::vector<double> best_residuals)
    : Error(what), best_residuals_(std::move(best_residuals))
  {
  }
  const std::vector<double> &BestResiduals() const { return best_residuals_; }

private:
  std::vector<double> best_residuals_;
};

// A form that must be invertible is numerically singular.
class DegenerateFormError : public Error
{
public:
  DegenerateFormError(const std::string &what, double sigma_min, double sigma_max)
    : Error(what), sigma_min_(sigma_min), sigma_max_(sigma_max)
  {
  }
  double SigmaMin() const { return sigma_min_; }
  double SigmaMax() const { return sigma_max_; }

private:
  double sigma_min_, sigma_max_;
};

}  // namespace magbloch

#endif  // MAGBLOCH_ERRORS_HPP
