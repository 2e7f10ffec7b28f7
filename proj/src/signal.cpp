// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#include "viscotomo/signal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "viscotomo/errors.hpp"

namespace viscotomo
{

namespace
{

// Uniform draw in the half-open interval (0, 1], suitable as a logarithm
// argument. Built from the top 53 bits of the generator output so the result
// is identical on every platform, unlike std::uniform_real_distribution.
double unit_interval_open(std::mt19937_64& rng)
{
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// One circular complex Gaussian draw with unit component variance, via the
// Box-Muller transform. Hand-rolled (rather than std::normal_distribution)
// for bit-reproducible output across standard library implementations.
Complex standard_complex_gaussian(std::mt19937_64& rng)
{
  const double u1 = unit_interval_open(rng);
  const double u2 = unit_interval_open(rng);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

TimeSignal ricker(const RickerSpec& spec, std::size_t nt, double dt)
{
  if (nt < 2)
    throw ConstraintError("ricker requires at least two samples");
  if (!(dt > 0.0))
    throw ConstraintError("ricker requires a positive sampling step");
  if (!(spec.peak_frequency_hz > 0.0))
    throw ConstraintError("ricker requires a positive peak frequency");
  if (!(spec.delay_s >= 0.0))
    throw ConstraintError("ricker requires a nonnegative delay");

  TimeSignal out{dt, std::vector<double>(nt)};
  const double pf = std::numbers::pi * spec.peak_frequency_hz;
  for (std::size_t k = 0; k < nt; ++k)
  {
    const double t = static_cast<double>(k) * dt - spec.delay_s;
    const double u = pf * pf * t * t;
    out.samples[k] = (1.0 - 2.0 * u) * std::exp(-u);
  }
  return out;
}

Complex laplace_fourier(const TimeSignal& signal, ComplexFrequency omega)
{
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < signal.samples.size(); ++k)
  {
    const double t = static_cast<double>(k) * signal.dt;
    const double decay = std::exp(-omega.omega_i * t);
    const double phase = omega.omega_r * t;
    acc += signal.samples[k] * decay * Complex{std::cos(phase), std::sin(phase)};
  }
  return acc;
}

FrequencyData add_white_noise(const FrequencyData& data, double snr_db, std::uint64_t seed)
{
  if (std::isnan(snr_db))
    throw ConstraintError("add_white_noise requires a non-NaN signal-to-noise ratio");
  const std::size_t n = data.value_count();
  if (n == 0)
    throw ConstraintError("add_white_noise requires nonempty data");
  if (std::isinf(snr_db) && snr_db > 0.0)
    return data;

  double signal_power = 0.0;
  for (const FrequencyTrace& trace : data.traces)
    for (const Complex& v : trace.values)
      signal_power += std::norm(v);

  // Per-component standard deviation: each complex draw contributes
  // 2*sigma^2 expected power, and N draws must total P_signal*10^(-snr/10).
  const double noise_power = signal_power * std::pow(10.0, -snr_db / 10.0);
  const double sigma = std::sqrt(noise_power / (2.0 * static_cast<double>(n)));

  std::mt19937_64 rng(seed);
  FrequencyData out = data;
  for (FrequencyTrace& trace : out.traces)
    for (Complex& v : trace.values)
      v += sigma * standard_complex_gaussian(rng);
  return out;
}

}  // namespace viscotomo
