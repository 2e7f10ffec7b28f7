// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_FREQUENCY_HPP
#define VISCOTOMO_FREQUENCY_HPP

#include <complex>
#include <numbers>

namespace viscotomo
{

using Complex = std::complex<double>;

// Damped angular frequency ω = ω_R + iω_I. The imaginary part acts as an
// exponential damping rate exp(-ω_I t) on time-domain signals; admissible
// frequencies have ω_R > 0 and ω_I ≥ 0. The struct itself stores any pair so
// that validation can report on inadmissible inputs.
struct ComplexFrequency
{
  double omega_r = 0.0;  // angular frequency, rad/s
  double omega_i = 0.0;  // damping rate, 1/s

  [[nodiscard]] Complex value() const { return {omega_r, omega_i}; }
  [[nodiscard]] bool admissible() const { return omega_r > 0.0 && omega_i >= 0.0; }
};

// Ordinary frequency in Hz to angular frequency, with optional damping rate.
[[nodiscard]] inline ComplexFrequency frequency_from_hertz(double freq_hz, double omega_i = 0.0)
{
  return {2.0 * std::numbers::pi * freq_hz, omega_i};
}

}  // namespace viscotomo

#endif  // VISCOTOMO_FREQUENCY_HPP
