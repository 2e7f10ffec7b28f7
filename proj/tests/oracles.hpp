// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0
//
// Independent extended-precision evaluations used as test oracles. These
// deliberately avoid the library's code paths: every formula is restated here
// in long double arithmetic so that agreement is meaningful.

#ifndef VISCOTOMO_TESTS_ORACLES_HPP
#define VISCOTOMO_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracles
{

using CompLD = std::complex<long double>;

// Kelvin-Voigt modulus at a real angular frequency.
inline CompLD kelvin_voigt_modulus(long double kappa0, long double omega_r, long double tau_eps)
{
  return {kappa0, -kappa0 * omega_r * tau_eps};
}

// Zener modulus by brute-force complex division.
inline CompLD zener_modulus(long double kappa0, long double omega_r, long double tau_eps,
                            long double tau_sig)
{
  const CompLD num{1.0L, -omega_r * tau_eps};
  const CompLD den{1.0L, -omega_r * tau_sig};
  return kappa0 * num / den;
}

inline long double quality_of(CompLD kappa)
{
  return kappa.real() / -kappa.imag();
}

inline CompLD wave_speed(CompLD kappa, long double rho)
{
  return std::sqrt(kappa / rho);
}

// Ricker wavelet sample at time t for peak frequency fp and delay t0.
inline long double ricker_sample(long double fp, long double t0, long double t)
{
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double u = pi * pi * fp * fp * (t - t0) * (t - t0);
  return (1.0L - 2.0L * u) * std::exp(-u);
}

// Unnormalized l2 norm of the relative deviation field, accumulated in
// extended precision.
inline long double relative_error_norm(const std::vector<double>& c_true,
                                       const std::vector<double>& c_rec)
{
  long double sum = 0.0L;
  for (std::size_t i = 0; i < c_true.size(); ++i)
  {
    const long double r =
        (static_cast<long double>(c_true[i]) - static_cast<long double>(c_rec[i])) /
        static_cast<long double>(c_true[i]);
    sum += r * r;
  }
  return std::sqrt(sum);
}

// Damped discrete-time Fourier sum: sum_k s_k exp(i(wr + i wi) k dt),
// accumulated term by term in extended precision.
inline CompLD damped_fourier_sum(const std::vector<double>& samples, long double dt,
                                 long double omega_r, long double omega_i)
{
  CompLD acc{0.0L, 0.0L};
  for (std::size_t k = 0; k < samples.size(); ++k)
  {
    const long double phase = omega_r * static_cast<long double>(k) * dt;
    const long double decay = std::exp(-omega_i * static_cast<long double>(k) * dt);
    acc += static_cast<long double>(samples[k]) * decay * CompLD{std::cos(phase), std::sin(phase)};
  }
  return acc;
}

// First-kind Hankel function H0(z) = J0(z) + i*Y0(z) by 64-term ascending
// series in extended precision. Accurate for |z| up to ~15, where the series
// cancellation still leaves plenty of long double digits.
inline CompLD hankel0_series(CompLD z)
{
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double euler_gamma = 0.577215664901532860606512090082402431L;

  const CompLD q = z * z / 4.0L;  // series variable
  CompLD term{1.0L, 0.0L};
  CompLD j0 = term;
  CompLD y_sum{0.0L, 0.0L};
  long double harmonic = 0.0L;
  for (int m = 1; m < 64; ++m)
  {
    term *= -q / static_cast<long double>(m * m);
    j0 += term;
    harmonic += 1.0L / static_cast<long double>(m);
    y_sum += -term * harmonic;  // (-1)^{m+1} q^m h_m / (m!)^2
  }
  const CompLD y0 = (2.0L / pi) * ((std::log(z / 2.0L) + euler_gamma) * j0 + y_sum);
  return j0 + CompLD{0.0L, 1.0L} * y0;
}

// Half the squared l2 norm of the stacked complex residual, the data-fit
// objective written as the naive double loop in extended precision.
inline long double half_residual_energy(
    const std::vector<std::vector<std::complex<double>>>& simulated,
    const std::vector<std::vector<std::complex<double>>>& observed)
{
  long double total = 0.0L;
  for (std::size_t s = 0; s < simulated.size(); ++s)
  {
    for (std::size_t r = 0; r < simulated[s].size(); ++r)
    {
      const long double d_re = static_cast<long double>(simulated[s][r].real()) -
                               static_cast<long double>(observed[s][r].real());
      const long double d_im = static_cast<long double>(simulated[s][r].imag()) -
                               static_cast<long double>(observed[s][r].imag());
      total += d_re * d_re + d_im * d_im;
    }
  }
  return 0.5L * total;
}

}  // namespace oracles

#endif  // VISCOTOMO_TESTS_ORACLES_HPP
