// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#include "viscotomo/attenuation.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "viscotomo/errors.hpp"

namespace viscotomo
{

namespace
{

// Principal-branch complex power with exact handling of the integer exponents
// that appear when fractional laws degenerate (β = 0 or 1).
Complex fractional_power(Complex z, double beta)
{
  if (beta == 0.0)
  {
    return {1.0, 0.0};
  }
  if (beta == 1.0)
  {
    return z;
  }
  return std::pow(z, beta);
}

void require(bool ok, const char* condition)
{
  if (!ok)
  {
    throw ConstraintError(condition);
  }
}

struct CoefficientValidator
{
  void operator()(const NoAttenuation&) const {}
  void operator()(const KolskyFutterman& m) const
  {
    require(m.eta_q >= 0.0 && std::isfinite(m.eta_q), "KolskyFutterman requires eta_q >= 0");
  }
  void operator()(const ColeCole& m) const
  {
    require(m.tau_eps >= m.tau_sig && m.tau_sig >= 0.0,
            "ColeCole requires tau_eps >= tau_sig >= 0");
    require(m.beta >= 0.0 && m.beta <= 1.0, "ColeCole requires 0 <= beta <= 1");
  }
  void operator()(const Zener& m) const
  {
    require(m.tau_eps >= m.tau_sig && m.tau_sig >= 0.0,
            "Zener requires tau_eps >= tau_sig >= 0");
  }
  void operator()(const KelvinVoigt& m) const
  {
    require(m.tau_eps >= 0.0, "KelvinVoigt requires tau_eps >= 0");
  }
  void operator()(const Maxwell& m) const { require(m.eta > 0.0, "Maxwell requires eta > 0"); }
  void operator()(const Ksb& m) const
  {
    require(m.eta_q > 0.0, "Ksb requires eta_q > 0");
    require(m.tau > 0.0, "Ksb requires tau > 0");
    require(m.beta > 0.0 && m.beta < 1.0, "Ksb requires 0 < beta < 1");
  }
  void operator()(const Szabo& m) const
  {
    require(m.tau > 0.0, "Szabo requires tau > 0");
    require(m.beta > 0.0 && m.beta < 1.0, "Szabo requires 0 < beta < 1");
  }
  void operator()(const Generalized& m) const
  {
    double strength_sum = 0.0;
    for (const auto& mech : m.mechanisms)
    {
      require(mech.omega_l > 0.0, "Generalized requires every omega_l > 0");
      require(mech.b_l >= 0.0, "Generalized requires every b_l >= 0");
      strength_sum += mech.b_l;
    }
    // Keeps Re(κ) > 0 at every frequency, so the law stays admissible.
    require(strength_sum < 1.0, "Generalized requires sum of b_l < 1");
  }
};

// Evaluation of the material laws at the real frequency ω_R.
struct ModulusEvaluator
{
  double kappa0;
  double omega_r;

  Complex operator()(const NoAttenuation&) const { return {kappa0, 0.0}; }

  Complex operator()(const KolskyFutterman& m) const
  {
    if (m.eta_q == 0.0)
    {
      throw ConstraintError("KolskyFutterman requires eta_q > 0 for evaluation");
    }
    return kappa0 * Complex{1.0, -1.0 / m.eta_q};
  }

  Complex operator()(const ColeCole& m) const
  {
    const Complex num = 1.0 + fractional_power(Complex{0.0, -omega_r * m.tau_eps}, m.beta);
    const Complex den = 1.0 + fractional_power(Complex{0.0, -omega_r * m.tau_sig}, m.beta);
    return kappa0 * num / den;
  }

  Complex operator()(const Zener& m) const
  {
    return kappa0 * Complex{1.0, -omega_r * m.tau_eps} / Complex{1.0, -omega_r * m.tau_sig};
  }

  Complex operator()(const KelvinVoigt& m) const
  {
    return {kappa0, -kappa0 * omega_r * m.tau_eps};
  }

  Complex operator()(const Maxwell& m) const
  {
    const Complex minus_i_omega_eta{0.0, -omega_r * m.eta};
    return minus_i_omega_eta * kappa0 / (kappa0 + minus_i_omega_eta);
  }

  Complex operator()(const Ksb& m) const
  {
    const Complex root =
        std::sqrt(1.0 + fractional_power(Complex{0.0, -omega_r * m.tau}, m.beta));
    const Complex den = 1.0 + m.eta_q / root;
    return kappa0 / (den * den);
  }

  Complex operator()(const Szabo& m) const
  {
    const Complex power_term =
        std::pow(m.tau, m.beta) * fractional_power(Complex{0.0, -omega_r}, m.beta - 1.0);
    return kappa0 / (1.0 + power_term);
  }

  Complex operator()(const Generalized& m) const
  {
    Complex relaxation{0.0, 0.0};
    for (const auto& mech : m.mechanisms)
    {
      relaxation += mech.b_l * mech.omega_l / Complex{mech.omega_l, -omega_r};
    }
    return kappa0 * (1.0 - relaxation);
  }
};

std::string format_interval(double lo, double hi)
{
  std::ostringstream oss;
  oss << "[" << lo << ", " << hi << "]";
  return oss.str();
}

// Bisection on a strictly decreasing Q(x) over x > 0, to 1e-10 relative width.
// The initial point is expanded geometrically in both directions to bracket
// the target before bisecting.
double bisect_decreasing(const std::function<double(double)>& q_of, double target, double x_seed,
                         double x_cap, const char* what)
{
  double lo = x_seed;
  double hi = x_seed;
  for (int i = 0; i < 400 && q_of(lo) < target; ++i)
  {
    lo *= 0.25;
  }
  for (int i = 0; i < 400 && q_of(hi) > target; ++i)
  {
    hi = std::min(hi * 4.0, x_cap);
    if (hi == x_cap)
    {
      break;
    }
  }
  if (!(q_of(lo) >= target && q_of(hi) <= target))
  {
    throw CalibrationError(std::string("no ") + what + " attains the quality-factor target in " +
                           format_interval(lo, hi));
  }
  while ((hi - lo) > 1e-10 * hi)
  {
    const double mid = 0.5 * (lo + hi);
    (q_of(mid) >= target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double require_fixed(const std::optional<double>& value, const char* what)
{
  if (!value)
  {
    throw ConstraintError(std::string("calibration requires a fixed ") + what);
  }
  return *value;
}

}  // namespace

// The enum values mirror the variant alternative order.
static_assert(std::is_same_v<std::variant_alternative_t<0, AttenuationSpec>, NoAttenuation>);
static_assert(std::is_same_v<
              std::variant_alternative_t<static_cast<std::size_t>(AttenuationKind::kMaxwell),
                                         AttenuationSpec>,
              Maxwell>);
static_assert(std::is_same_v<
              std::variant_alternative_t<static_cast<std::size_t>(AttenuationKind::kGeneralized),
                                         AttenuationSpec>,
              Generalized>);

AttenuationKind kind_of(const AttenuationSpec& spec)
{
  return static_cast<AttenuationKind>(spec.index());
}

std::string_view kind_name(AttenuationKind kind)
{
  switch (kind)
  {
    case AttenuationKind::kNone:
      return "none";
    case AttenuationKind::kKolskyFutterman:
      return "kolsky-futterman";
    case AttenuationKind::kColeCole:
      return "cole-cole";
    case AttenuationKind::kZener:
      return "zener";
    case AttenuationKind::kKelvinVoigt:
      return "kelvin-voigt";
    case AttenuationKind::kMaxwell:
      return "maxwell";
    case AttenuationKind::kKsb:
      return "ksb";
    case AttenuationKind::kSzabo:
      return "szabo";
    case AttenuationKind::kGeneralized:
      return "generalized";
  }
  return "unknown";
}

std::optional<AttenuationKind> kind_from_name(std::string_view name)
{
  for (int i = 0; i <= static_cast<int>(AttenuationKind::kGeneralized); ++i)
  {
    const auto kind = static_cast<AttenuationKind>(i);
    if (kind_name(kind) == name)
    {
      return kind;
    }
  }
  return std::nullopt;
}

void validate_coefficients(const AttenuationSpec& spec)
{
  std::visit(CoefficientValidator{}, spec);
}

Complex evaluate_bulk_modulus(const AttenuationSpec& spec, double kappa0,
                              const ComplexFrequency& omega)
{
  if (!(kappa0 > 0.0))
  {
    throw ConstraintError("bulk modulus evaluation requires kappa0 > 0");
  }
  validate_coefficients(spec);
  return std::visit(ModulusEvaluator{kappa0, omega.omega_r}, spec);
}

double quality_factor(const AttenuationSpec& spec, double kappa0, const ComplexFrequency& omega)
{
  if (std::holds_alternative<NoAttenuation>(spec))
  {
    return kInfiniteQ;
  }
  const Complex kappa = evaluate_bulk_modulus(spec, kappa0, omega);
  if (kappa.imag() > 0.0)
  {
    throw ValidityError("quality factor undefined: modulus has positive imaginary part");
  }
  if (!(kappa.real() > 0.0))
  {
    throw ValidityError("quality factor undefined: modulus has nonpositive real part");
  }
  if (kappa.imag() == 0.0)
  {
    return kInfiniteQ;
  }
  return kappa.real() / -kappa.imag();
}

Complex complex_wave_speed(Complex kappa, double rho)
{
  if (!(rho > 0.0))
  {
    throw ValidityError("wave speed requires rho > 0");
  }
  return std::sqrt(kappa / rho);
}

ValidityVerdict validate_attenuation(Complex wave_speed, const ComplexFrequency& omega)
{
  if (!omega.admissible())
  {
    return {false, 1};
  }
  if (!(wave_speed.real() > 0.0))
  {
    return {false, 2};
  }
  if (wave_speed.imag() > 0.0)
  {
    return {false, 3};
  }
  return {true, 0};
}

AttenuationSpec calibrate_to_quality(AttenuationKind kind, double kappa0, double target_q,
                                     const ComplexFrequency& omega_ref,
                                     const FixedCoefficients& fixed)
{
  if (!(kappa0 > 0.0))
  {
    throw ConstraintError("calibration requires kappa0 > 0");
  }
  if (!(target_q > 0.0))
  {
    throw ConstraintError("calibration requires target_q > 0");
  }
  if (!omega_ref.admissible())
  {
    throw ConstraintError("calibration requires an admissible reference frequency");
  }
  const double omega_r = omega_ref.omega_r;
  const double huge = 1e300;

  AttenuationSpec result;
  switch (kind)
  {
    case AttenuationKind::kNone:
      if (std::isinf(target_q))
      {
        result = NoAttenuation{};
        return result;  // quality factor is the infinity sentinel by definition
      }
      throw CalibrationError("a lossless medium cannot attain a finite quality factor");
    case AttenuationKind::kKolskyFutterman:
      result = KolskyFutterman{target_q};
      break;
    case AttenuationKind::kKelvinVoigt:
      result = KelvinVoigt{1.0 / (omega_r * target_q)};
      break;
    case AttenuationKind::kMaxwell:
      result = Maxwell{target_q * kappa0 / omega_r};
      break;
    case AttenuationKind::kZener:
    {
      const double tau_sig = require_fixed(fixed.tau_sig, "tau_sig");
      const auto q_of = [&](double gap)
      { return quality_factor(Zener{tau_sig + gap, tau_sig}, kappa0, omega_ref); };
      const double gap = bisect_decreasing(q_of, target_q, 1.0 / (omega_r * target_q), huge,
                                           "Zener tau_eps");
      result = Zener{tau_sig + gap, tau_sig};
      break;
    }
    case AttenuationKind::kColeCole:
    {
      const double tau_sig = require_fixed(fixed.tau_sig, "tau_sig");
      const double beta = require_fixed(fixed.beta, "beta");
      const auto q_of = [&](double gap)
      { return quality_factor(ColeCole{tau_sig + gap, tau_sig, beta}, kappa0, omega_ref); };
      const double gap = bisect_decreasing(q_of, target_q, 1.0 / (omega_r * target_q), huge,
                                           "ColeCole tau_eps");
      result = ColeCole{tau_sig + gap, tau_sig, beta};
      break;
    }
    case AttenuationKind::kKsb:
    {
      const double tau = require_fixed(fixed.tau, "tau");
      const double beta = require_fixed(fixed.beta, "beta");
      const auto q_of = [&](double eta_q)
      { return quality_factor(Ksb{eta_q, tau, beta}, kappa0, omega_ref); };
      const double eta_q = bisect_decreasing(q_of, target_q, 1.0, huge, "Ksb eta_q");
      result = Ksb{eta_q, tau, beta};
      break;
    }
    case AttenuationKind::kSzabo:
    {
      const double beta = require_fixed(fixed.beta, "beta");
      const auto q_of = [&](double tau)
      { return quality_factor(Szabo{tau, beta}, kappa0, omega_ref); };
      const double tau = bisect_decreasing(q_of, target_q, 1.0 / omega_r, huge, "Szabo tau");
      result = Szabo{tau, beta};
      break;
    }
    case AttenuationKind::kGeneralized:
    {
      double strength_sum = 0.0;
      for (const auto& mech : fixed.mechanisms)
      {
        strength_sum += mech.b_l;
      }
      if (fixed.mechanisms.empty() || strength_sum <= 0.0)
      {
        throw ConstraintError(
            "Generalized calibration requires fixed mechanisms with positive strengths");
      }
      const auto scaled = [&](double scale)
      {
        Generalized g;
        g.mechanisms = fixed.mechanisms;
        for (auto& mech : g.mechanisms)
        {
          mech.b_l *= scale;
        }
        return g;
      };
      const auto q_of = [&](double scale)
      { return quality_factor(scaled(scale), kappa0, omega_ref); };
      const double scale_cap = (1.0 - 1e-9) / strength_sum;
      const double scale =
          bisect_decreasing(q_of, target_q, std::min(0.5 * scale_cap, 1.0 / target_q), scale_cap,
                            "Generalized strength scale");
      result = scaled(scale);
      break;
    }
    default:
      throw ConstraintError("unknown attenuation kind");
  }

  const double achieved = quality_factor(result, kappa0, omega_ref);
  if (std::isinf(target_q) && std::isinf(achieved))
  {
    return result;
  }
  if (!(std::abs(achieved - target_q) <= 1e-6 * target_q))
  {
    throw CalibrationError("calibration verification failed: achieved quality factor " +
                           std::to_string(achieved) + " for target " + std::to_string(target_q));
  }
  return result;
}

std::vector<DispersionRow> dispersion_table(const AttenuationSpec& spec, double kappa0, double rho,
                                            const std::vector<double>& freqs_hz)
{
  if (!(rho > 0.0))
  {
    throw ConstraintError("dispersion table requires rho > 0");
  }
  std::vector<DispersionRow> rows;
  rows.reserve(freqs_hz.size());
  for (const double f : freqs_hz)
  {
    if (!(f > 0.0))
    {
      throw ConstraintError("dispersion table requires positive frequencies");
    }
    rows.push_back({f, quality_factor(spec, kappa0, frequency_from_hertz(f))});
  }
  return rows;
}

}  // namespace viscotomo
