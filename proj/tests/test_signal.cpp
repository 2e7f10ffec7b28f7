// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "viscotomo/data.hpp"
#include "viscotomo/errors.hpp"
#include "viscotomo/signal.hpp"

using namespace viscotomo;

namespace
{

constexpr double kPi = std::numbers::pi;

// A small synthetic data set: `n_sources` traces of `n_receivers` smoothly
// varying complex values at the given frequency.
FrequencyData synthetic_data(int n_sources, int n_receivers, ComplexFrequency omega)
{
  FrequencyData data;
  for (int s = 0; s < n_sources; ++s)
  {
    FrequencyTrace trace;
    trace.source_id = s;
    trace.omega = omega;
    trace.values.reserve(static_cast<std::size_t>(n_receivers));
    for (int r = 0; r < n_receivers; ++r)
    {
      const double phase = 0.05 * r + 0.3 * s;
      const double mag = 1.0 + 0.5 * std::sin(0.11 * r + s);
      trace.values.emplace_back(mag * std::cos(phase), mag * std::sin(phase));
    }
    data.traces.push_back(std::move(trace));
  }
  return data;
}

double measured_snr_db(const FrequencyData& clean, const FrequencyData& noisy)
{
  double signal_power = 0.0;
  double noise_power = 0.0;
  for (std::size_t t = 0; t < clean.traces.size(); ++t)
  {
    for (std::size_t r = 0; r < clean.traces[t].values.size(); ++r)
    {
      signal_power += std::norm(clean.traces[t].values[r]);
      noise_power += std::norm(noisy.traces[t].values[r] - clean.traces[t].values[r]);
    }
  }
  return 10.0 * std::log10(signal_power / noise_power);
}

}  // namespace

TEST_CASE("ricker wavelet matches its closed form and peaks at the delay sample")
{
  const RickerSpec spec{1.0e6, 1.5e-6};
  const double dt = 1.0e-8;
  const TimeSignal sig = ricker(spec, 301, dt);

  REQUIRE(sig.samples.size() == 301);
  REQUIRE(sig.dt == dt);

  // The delay lands exactly on sample 150, where the wavelet is exactly one.
  CHECK(sig.samples[150] == 1.0);

  std::size_t argmax = 0;
  for (std::size_t k = 0; k < sig.samples.size(); ++k)
  {
    CHECK(std::abs(sig.samples[k]) <= 1.0);
    if (std::abs(sig.samples[k]) > std::abs(sig.samples[argmax]))
      argmax = k;
    const long double expect =
        oracles::ricker_sample(spec.peak_frequency_hz, spec.delay_s, k * static_cast<long double>(dt));
    CHECK(sig.samples[k] == doctest::Approx(static_cast<double>(expect)).epsilon(1e-14));
  }
  CHECK(argmax == 150);
}

TEST_CASE("ricker wavelet crosses zero where its polynomial factor vanishes")
{
  // Choose the step so that samples land exactly on t0 +- 1/(pi f_p sqrt(2)),
  // the roots of 1 - 2 pi^2 f_p^2 (t - t0)^2.
  const double fp = 1.0e6;
  const double root_offset = 1.0 / (kPi * fp * std::sqrt(2.0));
  const double dt = root_offset / 50.0;
  const RickerSpec spec{fp, 100.0 * dt};
  const TimeSignal sig = ricker(spec, 201, dt);

  CHECK(std::abs(sig.samples[50]) < 1e-12);   // t0 - root_offset
  CHECK(std::abs(sig.samples[150]) < 1e-12);  // t0 + root_offset
  // Sign change across each root: positive inside the main lobe, negative outside.
  CHECK(sig.samples[51] > 0.0);
  CHECK(sig.samples[49] < 0.0);
  CHECK(sig.samples[149] > 0.0);
  CHECK(sig.samples[151] < 0.0);
}

TEST_CASE("ricker spectrum magnitude peaks within one bin of the nominal peak frequency")
{
  const RickerSpec spec{1.0e6, 1.5e-6};
  const TimeSignal sig = ricker(spec, 301, 1.0e-8);

  const double bin_hz = 1.0e4;
  double best_freq = 0.0;
  double best_mag = -1.0;
  for (double f = 0.5e6; f <= 1.5e6 + 0.5 * bin_hz; f += bin_hz)
  {
    const double mag = std::abs(laplace_fourier(sig, frequency_from_hertz(f)));
    if (mag > best_mag)
    {
      best_mag = mag;
      best_freq = f;
    }
  }
  CHECK(std::abs(best_freq - spec.peak_frequency_hz) <= bin_hz * (1.0 + 1e-12));
}

TEST_CASE("ricker integrates to zero over windows much wider than its support")
{
  struct Case
  {
    double fp, delay, dt;
    std::size_t nt;
  };
  // Windows cover well over six standard widths on each side of the delay.
  const Case cases[] = {
      {1.0e6, 3.0e-6, 1.0e-8, 601},
      {3.0e5, 1.0e-5, 2.5e-8, 801},
  };
  for (const Case& c : cases)
  {
    const TimeSignal sig = ricker(RickerSpec{c.fp, c.delay}, c.nt, c.dt);
    long double sum = 0.0L;
    for (double s : sig.samples)
      sum += s;
    CHECK(std::abs(static_cast<double>(sum) * c.dt) <= 1e-3 / c.fp);
  }
}

TEST_CASE("ricker rejects invalid sampling requests")
{
  const auto make = [](double fp, double delay, std::size_t nt, double dt) {
    static_cast<void>(ricker(RickerSpec{fp, delay}, nt, dt));
  };
  CHECK_THROWS_AS(make(1.0e6, 0.0, 1, 1e-8), ConstraintError);
  CHECK_THROWS_AS(make(1.0e6, 0.0, 64, 0.0), ConstraintError);
  CHECK_THROWS_AS(make(0.0, 0.0, 64, 1e-8), ConstraintError);
  CHECK_THROWS_AS(make(1.0e6, -1e-9, 64, 1e-8), ConstraintError);
}

TEST_CASE("damped fourier transform reproduces pinned analytic values")
{
  // A unit impulse at k = 0 transforms to one at any frequency.
  const TimeSignal impulse{1.0e-7, {1.0, 0.0, 0.0, 0.0}};
  for (const ComplexFrequency omega :
       {ComplexFrequency{2.0 * kPi * 3.0e5, 0.0}, ComplexFrequency{1.0, 5.0e4},
        ComplexFrequency{0.0, 0.0}})
  {
    const Complex v = laplace_fourier(impulse, omega);
    CHECK(v.real() == 1.0);
    CHECK(v.imag() == 0.0);
  }

  // A constant signal at zero frequency sums to the sample count.
  const TimeSignal ones{1.0e-6, std::vector<double>(7, 1.0)};
  const Complex at_zero = laplace_fourier(ones, ComplexFrequency{0.0, 0.0});
  CHECK(at_zero.real() == 7.0);
  CHECK(at_zero.imag() == 0.0);
  const Complex near_zero = laplace_fourier(ones, ComplexFrequency{1e-9, 0.0});
  CHECK(near_zero.real() == doctest::Approx(7.0).epsilon(1e-12));

  // One sample delayed by one second under damping rate ln 2 halves the value.
  const TimeSignal delayed{1.0, {0.0, 1.0}};
  const Complex halved = laplace_fourier(delayed, ComplexFrequency{0.0, std::log(2.0)});
  CHECK(halved.real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(halved.imag()) < 1e-16);
}

TEST_CASE("damped fourier transform matches the extended-precision summation oracle")
{
  std::mt19937_64 rng(20260815u);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);

  std::vector<double> samples(257);
  for (double& s : samples)
    s = amp(rng);
  const TimeSignal sig{2.0e-8, samples};

  const ComplexFrequency omegas[] = {
      frequency_from_hertz(3.0e5),
      frequency_from_hertz(3.0e5, 2.0e4),
      frequency_from_hertz(7.5e5, 1.0e5),
      {1.0e3, 0.0},
  };
  for (const ComplexFrequency omega : omegas)
  {
    const Complex got = laplace_fourier(sig, omega);
    const oracles::CompLD want =
        oracles::damped_fourier_sum(samples, sig.dt, omega.omega_r, omega.omega_i);
    CHECK(got.real() == doctest::Approx(static_cast<double>(want.real())).epsilon(1e-13));
    CHECK(got.imag() == doctest::Approx(static_cast<double>(want.imag())).epsilon(1e-13));
  }
}

TEST_CASE("damped fourier transform is linear in the signal")
{
  std::mt19937_64 rng(424242u);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(5.0e4, 8.0e5);
  std::uniform_real_distribution<double> damp(0.0, 1.0e5);

  const double dt = 2.5e-8;
  for (int trial = 0; trial < 200; ++trial)
  {
    std::vector<double> s1(64), s2(64), mix(64);
    const double a = amp(rng), b = amp(rng);
    for (std::size_t k = 0; k < s1.size(); ++k)
    {
      s1[k] = amp(rng);
      s2[k] = amp(rng);
      mix[k] = a * s1[k] + b * s2[k];
    }
    const ComplexFrequency omega = frequency_from_hertz(freq(rng), damp(rng));
    const Complex lhs = laplace_fourier(TimeSignal{dt, mix}, omega);
    const Complex rhs =
        a * laplace_fourier(TimeSignal{dt, s1}, omega) + b * laplace_fourier(TimeSignal{dt, s2}, omega);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
  }
}

TEST_CASE("damping discounts a time-shifted signal by the shift decay factor")
{
  // A wavelet comfortably inside the window, shifted by m samples: the damped
  // transform magnitude scales by exp(-omega_i m dt) up to truncation terms.
  const double dt = 1.0e-8;
  const std::size_t nt = 1024;
  const std::size_t shift = 100;
  const TimeSignal base = ricker(RickerSpec{1.0e6, 2.0e-6}, nt, dt);

  TimeSignal shifted{dt, std::vector<double>(nt, 0.0)};
  for (std::size_t k = 0; k + shift < nt; ++k)
    shifted.samples[k + shift] = base.samples[k];

  for (const double omega_i : {5.0e4, 2.0e5})
  {
    const ComplexFrequency omega = frequency_from_hertz(4.0e5, omega_i);
    const double mag_base = std::abs(laplace_fourier(base, omega));
    const double mag_shift = std::abs(laplace_fourier(shifted, omega));
    const double expected = std::exp(-omega_i * static_cast<double>(shift) * dt) * mag_base;
    CHECK(std::abs(mag_shift - expected) <= 1e-10 * mag_base);
  }
}

TEST_CASE("white noise injection realizes the requested signal-to-noise ratio")
{
  FrequencyData data = synthetic_data(4, 1250, frequency_from_hertz(3.0e5));
  FrequencyData more = synthetic_data(4, 1250, frequency_from_hertz(5.0e5, 1.0e4));
  for (FrequencyTrace& t : more.traces)
    data.traces.push_back(std::move(t));

  const FrequencyData noisy = add_white_noise(data, 20.0, 977u);
  REQUIRE(noisy.traces.size() == data.traces.size());
  const double snr = measured_snr_db(data, noisy);
  CHECK(snr == doctest::Approx(20.0).epsilon(0.025));
  CHECK(std::abs(snr - 20.0) <= 0.5);

  // Every value receives noise: the probability of an exact zero draw is nil.
  for (std::size_t t = 0; t < data.traces.size(); ++t)
    for (std::size_t r = 0; r < data.traces[t].values.size(); ++r)
      CHECK(noisy.traces[t].values[r] != data.traces[t].values[r]);
}

TEST_CASE("white noise is circular: components are balanced and uncorrelated")
{
  const FrequencyData data = synthetic_data(8, 1250, frequency_from_hertz(3.0e5));
  const FrequencyData noisy = add_white_noise(data, 10.0, 31415u);

  double sum_re = 0.0, sum_im = 0.0, sum_re2 = 0.0, sum_im2 = 0.0, sum_cross = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < data.traces.size(); ++t)
  {
    for (std::size_t r = 0; r < data.traces[t].values.size(); ++r)
    {
      const Complex noise = noisy.traces[t].values[r] - data.traces[t].values[r];
      sum_re += noise.real();
      sum_im += noise.imag();
      sum_re2 += noise.real() * noise.real();
      sum_im2 += noise.imag() * noise.imag();
      sum_cross += noise.real() * noise.imag();
      ++n;
    }
  }
  const double nd = static_cast<double>(n);
  const double sigma = std::sqrt((sum_re2 + sum_im2) / (2.0 * nd));
  CHECK(std::abs(sum_re / nd) < 0.05 * sigma);
  CHECK(std::abs(sum_im / nd) < 0.05 * sigma);
  // Real and imaginary variances agree and the cross-correlation vanishes.
  CHECK(sum_re2 / nd == doctest::Approx(sigma * sigma).epsilon(0.05));
  CHECK(sum_im2 / nd == doctest::Approx(sigma * sigma).epsilon(0.05));
  CHECK(std::abs(sum_cross / nd) < 0.05 * sigma * sigma);
}

TEST_CASE("white noise injection is bit-deterministic in the seed")
{
  const FrequencyData data = synthetic_data(3, 40, frequency_from_hertz(2.0e5));
  const FrequencyData a = add_white_noise(data, 20.0, 1234u);
  const FrequencyData b = add_white_noise(data, 20.0, 1234u);
  const FrequencyData c = add_white_noise(data, 20.0, 1235u);

  bool identical = true;
  bool distinct = false;
  for (std::size_t t = 0; t < a.traces.size(); ++t)
  {
    for (std::size_t r = 0; r < a.traces[t].values.size(); ++r)
    {
      identical = identical && (a.traces[t].values[r] == b.traces[t].values[r]);
      distinct = distinct || (a.traces[t].values[r] != c.traces[t].values[r]);
    }
  }
  CHECK(identical);
  CHECK(distinct);
}

TEST_CASE("infinite signal-to-noise ratio leaves the data untouched")
{
  const FrequencyData data = synthetic_data(2, 25, frequency_from_hertz(2.0e5));
  const FrequencyData out =
      add_white_noise(data, std::numeric_limits<double>::infinity(), 7u);
  REQUIRE(out.traces.size() == data.traces.size());
  for (std::size_t t = 0; t < data.traces.size(); ++t)
  {
    REQUIRE(out.traces[t].values.size() == data.traces[t].values.size());
    CHECK(out.traces[t].source_id == data.traces[t].source_id);
    for (std::size_t r = 0; r < data.traces[t].values.size(); ++r)
      CHECK(out.traces[t].values[r] == data.traces[t].values[r]);
  }
}

TEST_CASE("white noise injection rejects empty data and non-finite ratios")
{
  const auto run = [](const FrequencyData& d, double snr) {
    static_cast<void>(add_white_noise(d, snr, 1u));
  };
  CHECK_THROWS_AS(run(FrequencyData{}, 20.0), ConstraintError);
  const FrequencyData data = synthetic_data(1, 4, frequency_from_hertz(2.0e5));
  CHECK_THROWS_AS(run(data, std::numeric_limits<double>::quiet_NaN()), ConstraintError);
}
