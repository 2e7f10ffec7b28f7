// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_ERRORS_HPP
#define VISCOTOMO_ERRORS_HPP

#include <stdexcept>

namespace viscotomo
{

// A structural constraint on model coefficients or grid shape is violated.
class ConstraintError : public std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

// A physical admissibility condition fails (frequency half-plane, sign of the
// real or imaginary part of a modulus or wave speed).
class ValidityError : public std::domain_error
{
  using std::domain_error::domain_error;
};

// The coefficient search for a quality-factor target found no solution.
class CalibrationError : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// Assembly or factorization of the discrete operator failed.
class SolverError : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// A run configuration or input file is malformed or missing.
class ConfigError : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

}  // namespace viscotomo

#endif  // VISCOTOMO_ERRORS_HPP
