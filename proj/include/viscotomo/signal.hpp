// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_SIGNAL_HPP
#define VISCOTOMO_SIGNAL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "viscotomo/data.hpp"
#include "viscotomo/frequency.hpp"

namespace viscotomo
{

// Uniformly sampled real time series.
struct TimeSignal
{
  double dt = 0.0;  // sampling step, s
  std::vector<double> samples;
};

// Ricker wavelet parameters: S(t) = (1 - 2u) exp(-u), u = pi^2 f_p^2 (t-t0)^2.
struct RickerSpec
{
  double peak_frequency_hz = 0.0;
  double delay_s = 0.0;
};

// Samples the Ricker wavelet at t_k = k*dt for k = 0..nt-1.
// Throws ConstraintError unless nt >= 2, dt > 0, peak_frequency_hz > 0, and
// delay_s >= 0.
[[nodiscard]] TimeSignal ricker(const RickerSpec& spec, std::size_t nt, double dt);

// Damped discrete-time Fourier evaluation sum_k S_k exp(i*omega*k*dt), where
// the imaginary part of omega damps late samples by exp(-omega_i*k*dt). Any
// omega is accepted; at omega = 0 this degenerates to the plain sample sum.
[[nodiscard]] Complex laplace_fourier(const TimeSignal& signal, ComplexFrequency omega);

// Adds independent circular complex Gaussian noise to every trace value. The
// variance is chosen so the expected ratio 10*log10(sum |signal|^2 / sum
// |noise|^2) over the whole data set equals snr_db. An infinite snr_db returns
// the input unchanged. Identical (data, snr_db, seed) triples produce
// bit-identical output on every platform; the generator is seeded explicitly
// so concurrent callers stay deterministic.
// Throws ConstraintError if the data holds no values or snr_db is NaN.
[[nodiscard]] FrequencyData add_white_noise(const FrequencyData& data, double snr_db,
                                            std::uint64_t seed);

}  // namespace viscotomo

#endif  // VISCOTOMO_SIGNAL_HPP
