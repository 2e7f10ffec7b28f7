// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_ATTENUATION_HPP
#define VISCOTOMO_ATTENUATION_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "viscotomo/frequency.hpp"

namespace viscotomo
{

//
// Attenuation laws. Each law maps a real background bulk modulus κ₀ to a
// complex modulus κ with Re(κ) > 0 and Im(κ) ≤ 0; the imaginary part encodes
// the loss per cycle, quantified by the quality factor Q = Re(κ)/(-Im(κ)).
//

// Lossless medium: κ = κ₀.
struct NoAttenuation
{
};

// Frequency-independent quality factor: κ = κ₀·(1 - i/ŋ).
struct KolskyFutterman
{
  double eta_q = 0.0;  // quality factor ŋ, dimensionless; evaluation requires ŋ > 0
};

// Fractional relaxation κ = κ₀·(1 + (-iωτ_ε)^β)/(1 + (-iωτ_σ)^β); the
// exponent β ∈ [0, 1] interpolates between the lossless limit and Zener.
struct ColeCole
{
  double tau_eps = 0.0;  // strain relaxation time, s
  double tau_sig = 0.0;  // stress relaxation time, s
  double beta = 1.0;     // fractional exponent
};

// Standard linear solid: κ = κ₀·(1 - iωτ_ε)/(1 - iωτ_σ).
struct Zener
{
  double tau_eps = 0.0;  // strain relaxation time, s
  double tau_sig = 0.0;  // stress relaxation time, s
};

// Viscous spring-dashpot in parallel: κ = κ₀ - iωκ₀τ_ε.
struct KelvinVoigt
{
  double tau_eps = 0.0;  // relaxation time, s
};

// Spring-dashpot in series: κ = -iωκ₀η/(κ₀ - iωη).
struct Maxwell
{
  double eta = 0.0;  // viscosity, Pa·s
};

// Square-root relaxation kernel: κ = κ₀ / (1 + ŋ/sqrt(1 + (-iωτ)^β))².
struct Ksb
{
  double eta_q = 0.0;  // strength, dimensionless, > 0
  double tau = 0.0;    // relaxation time, s, > 0
  double beta = 0.5;   // fractional exponent in (0, 1)
};

// Power-law relaxation: κ = κ₀ / (1 + τ^β·(-iω)^(β-1)).
struct Szabo
{
  double tau = 0.0;   // relaxation coefficient, > 0
  double beta = 0.5;  // fractional exponent in (0, 1)
};

// One standard relaxation mechanism of the generalized superposition model.
struct RelaxationMechanism
{
  double omega_l = 0.0;  // corner angular frequency, rad/s, > 0
  double b_l = 0.0;      // strength, dimensionless, ≥ 0
};

// Superposition of L relaxation mechanisms:
// κ = κ₀·(1 - Σ_l b_l·ω_l/(ω_l - iω)). L = 0 reduces to the lossless law.
struct Generalized
{
  std::vector<RelaxationMechanism> mechanisms;
};

using AttenuationSpec = std::variant<NoAttenuation, KolskyFutterman, ColeCole, Zener,
                                     KelvinVoigt, Maxwell, Ksb, Szabo, Generalized>;

// Stable tags used for dispatch, grid-file headers and CLI names.
enum class AttenuationKind : std::uint8_t
{
  kNone = 0,
  kKolskyFutterman = 1,
  kColeCole = 2,
  kZener = 3,
  kKelvinVoigt = 4,
  kMaxwell = 5,
  kKsb = 6,
  kSzabo = 7,
  kGeneralized = 8,
};

[[nodiscard]] AttenuationKind kind_of(const AttenuationSpec& spec);
[[nodiscard]] std::string_view kind_name(AttenuationKind kind);
[[nodiscard]] std::optional<AttenuationKind> kind_from_name(std::string_view name);

// Throws ConstraintError naming the violated coefficient condition.
void validate_coefficients(const AttenuationSpec& spec);

// Complex bulk modulus κ(ω_R) for a background modulus κ₀ > 0. Only the real
// part of the frequency enters the relaxation laws; the damping rate ω_I acts
// on the wave equation terms, not on the material law. Fractional powers use
// the principal complex branch; all admissible inputs lie in the closed lower
// half plane, where that branch keeps Im(κ) ≤ 0.
[[nodiscard]] Complex evaluate_bulk_modulus(const AttenuationSpec& spec, double kappa0,
                                            const ComplexFrequency& omega);

// Sentinel returned by quality_factor for lossless media.
inline constexpr double kInfiniteQ = std::numeric_limits<double>::infinity();

// Q = Re(κ)/(-Im(κ)). Lossless media (Im = 0) return kInfiniteQ; a positive
// imaginary part is inadmissible and throws ValidityError.
[[nodiscard]] double quality_factor(const AttenuationSpec& spec, double kappa0,
                                    const ComplexFrequency& omega);

// c = sqrt(κ/ρ) with the principal square root, so an admissible modulus
// (Re > 0, Im ≤ 0) yields Re(c) > 0 and Im(c) ≤ 0. Throws ValidityError for
// ρ ≤ 0.
[[nodiscard]] Complex complex_wave_speed(Complex kappa, double rho);

// Clause-by-clause admissibility verdict for a wave speed at a frequency:
// clause 1: ω_R > 0 and ω_I ≥ 0; clause 2: Re(c) > 0; clause 3: Im(c) ≤ 0.
struct ValidityVerdict
{
  bool ok = false;
  int violated_clause = 0;  // 0 when ok, else the first violated clause (1-3)

  explicit operator bool() const { return ok; }
};

[[nodiscard]] ValidityVerdict validate_attenuation(Complex wave_speed,
                                                   const ComplexFrequency& omega);

// Coefficients held fixed during single-target calibration. Which members are
// required depends on the model kind being calibrated; superfluous members are
// ignored.
struct FixedCoefficients
{
  std::optional<double> tau_sig;                 // ColeCole, Zener
  std::optional<double> beta;                    // ColeCole, Ksb, Szabo
  std::optional<double> tau;                     // Ksb
  std::vector<RelaxationMechanism> mechanisms;   // Generalized (strengths are rescaled)
};

// Solves for the one free coefficient of `kind` so that the quality factor at
// omega_ref matches target_q to 1e-6 relative. Closed forms are used for
// KolskyFutterman (ŋ = Q), KelvinVoigt (τ_ε = 1/(ω_R·Q)) and Maxwell
// (η = Q·κ₀/ω_R); the remaining kinds use bracketing bisection on the free
// coefficient (τ_ε for ColeCole/Zener, ŋ for Ksb, τ for Szabo, a common
// strength scale for Generalized). Throws CalibrationError, reporting the
// searched interval, when no bracket contains the target.
[[nodiscard]] AttenuationSpec calibrate_to_quality(AttenuationKind kind, double kappa0,
                                                   double target_q,
                                                   const ComplexFrequency& omega_ref,
                                                   const FixedCoefficients& fixed = {});

struct DispersionRow
{
  double freq_hz = 0.0;
  double q = 0.0;
};

// Quality factor per ordinary frequency (ω_I = 0), one row per entry of freqs.
[[nodiscard]] std::vector<DispersionRow> dispersion_table(const AttenuationSpec& spec,
                                                          double kappa0, double rho,
                                                          const std::vector<double>& freqs_hz);

}  // namespace viscotomo

#endif  // VISCOTOMO_ATTENUATION_HPP
