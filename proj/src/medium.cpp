// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#include "viscotomo/medium.hpp"

#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "viscotomo/errors.hpp"

namespace viscotomo
{

namespace
{

void require(bool ok, const std::string& message)
{
  if (!ok)
    throw ConstraintError(message);
}

// Expected coefficient array count per model kind; the superposition model is
// variable-length and handled separately.
int fixed_coefficient_count(AttenuationKind kind)
{
  switch (kind)
  {
    case AttenuationKind::kNone:
      return 0;
    case AttenuationKind::kKolskyFutterman:
    case AttenuationKind::kKelvinVoigt:
    case AttenuationKind::kMaxwell:
      return 1;
    case AttenuationKind::kZener:
    case AttenuationKind::kSzabo:
      return 2;
    case AttenuationKind::kColeCole:
    case AttenuationKind::kKsb:
      return 3;
    case AttenuationKind::kGeneralized:
      return -1;
  }
  throw ConstraintError("unknown attenuation kind");
}

void check_positive_fields(const FieldPair& fields)
{
  require(fields.first.size() == fields.second.size(),
          "field arrays must have matching lengths");
  for (Eigen::Index i = 0; i < fields.first.size(); ++i)
  {
    if (!(fields.first[i] > 0.0))
      throw ConstraintError("field values must be positive; violation at node " +
                            std::to_string(i));
    if (!(fields.second[i] > 0.0))
      throw ConstraintError("field values must be positive; violation at node " +
                            std::to_string(i));
  }
}

void check_tissue(const TissueValues& tissue, const std::string& where)
{
  require(tissue.c0 > 0.0, where + " requires a positive wave speed");
  require(tissue.rho > 0.0, where + " requires a positive density");
  require(tissue.q > 0.0, where + " requires a positive quality factor");
}

// Platform-independent uniform draw in [-1, 1).
double symmetric_unit(std::mt19937_64& rng)
{
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

void validate_medium(const MediumGrid& grid)
{
  require(grid.nx >= 3 && grid.nz >= 3, "medium requires at least 3 nodes per direction");
  require(grid.dx > 0.0 && grid.dz > 0.0, "medium requires positive node spacings");

  const Eigen::Index n = grid.node_count();
  require(grid.kappa0.size() == n, "kappa0 array length must equal the node count");
  require(grid.rho.size() == n, "rho array length must equal the node count");

  // Throws if the coefficient array count is invalid for the kind.
  static_cast<void>(coefficient_names(grid.atten_kind, grid.atten_coeffs.size()));
  for (const Eigen::ArrayXd& coeff : grid.atten_coeffs)
    require(coeff.size() == n, "coefficient array length must equal the node count");

  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (!(grid.kappa0[i] > 0.0))
      throw ConstraintError("kappa0 must be positive at node " + std::to_string(i));
    if (!(grid.rho[i] > 0.0))
      throw ConstraintError("rho must be positive at node " + std::to_string(i));
    try
    {
      validate_coefficients(attenuation_at(grid, i));
    }
    catch (const ConstraintError& err)
    {
      throw ConstraintError("node " + std::to_string(i) + ": " + err.what());
    }
  }
}

AttenuationSpec attenuation_at(const MediumGrid& grid, Eigen::Index node)
{
  const auto c = [&](std::size_t j) { return grid.atten_coeffs[j][node]; };
  switch (grid.atten_kind)
  {
    case AttenuationKind::kNone:
      return NoAttenuation{};
    case AttenuationKind::kKolskyFutterman:
      return KolskyFutterman{c(0)};
    case AttenuationKind::kColeCole:
      return ColeCole{c(0), c(1), c(2)};
    case AttenuationKind::kZener:
      return Zener{c(0), c(1)};
    case AttenuationKind::kKelvinVoigt:
      return KelvinVoigt{c(0)};
    case AttenuationKind::kMaxwell:
      return Maxwell{c(0)};
    case AttenuationKind::kKsb:
      return Ksb{c(0), c(1), c(2)};
    case AttenuationKind::kSzabo:
      return Szabo{c(0), c(1)};
    case AttenuationKind::kGeneralized:
    {
      Generalized gen;
      gen.mechanisms.reserve(grid.atten_coeffs.size() / 2);
      for (std::size_t l = 0; l + 1 < grid.atten_coeffs.size(); l += 2)
        gen.mechanisms.push_back(RelaxationMechanism{c(l), c(l + 1)});
      return gen;
    }
  }
  throw ConstraintError("unknown attenuation kind");
}

std::vector<double> coefficients_of(const AttenuationSpec& spec)
{
  struct Visitor
  {
    std::vector<double> operator()(const NoAttenuation&) const { return {}; }
    std::vector<double> operator()(const KolskyFutterman& m) const { return {m.eta_q}; }
    std::vector<double> operator()(const ColeCole& m) const
    {
      return {m.tau_eps, m.tau_sig, m.beta};
    }
    std::vector<double> operator()(const Zener& m) const { return {m.tau_eps, m.tau_sig}; }
    std::vector<double> operator()(const KelvinVoigt& m) const { return {m.tau_eps}; }
    std::vector<double> operator()(const Maxwell& m) const { return {m.eta}; }
    std::vector<double> operator()(const Ksb& m) const { return {m.eta_q, m.tau, m.beta}; }
    std::vector<double> operator()(const Szabo& m) const { return {m.tau, m.beta}; }
    std::vector<double> operator()(const Generalized& m) const
    {
      std::vector<double> out;
      out.reserve(2 * m.mechanisms.size());
      for (const RelaxationMechanism& mech : m.mechanisms)
      {
        out.push_back(mech.omega_l);
        out.push_back(mech.b_l);
      }
      return out;
    }
  };
  return std::visit(Visitor{}, spec);
}

std::vector<std::string> coefficient_names(AttenuationKind kind, std::size_t count)
{
  if (kind == AttenuationKind::kGeneralized)
  {
    require(count % 2 == 0,
            "the superposition model stores coefficient arrays in (omega_l, b_l) pairs");
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t l = 0; l < count / 2; ++l)
    {
      names.push_back("omega_" + std::to_string(l + 1));
      names.push_back("b_" + std::to_string(l + 1));
    }
    return names;
  }

  const int expected = fixed_coefficient_count(kind);
  require(count == static_cast<std::size_t>(expected),
          std::string(kind_name(kind)) + " stores " + std::to_string(expected) +
              " coefficient arrays, got " + std::to_string(count));
  switch (kind)
  {
    case AttenuationKind::kNone:
      return {};
    case AttenuationKind::kKolskyFutterman:
      return {"eta_q"};
    case AttenuationKind::kColeCole:
      return {"tau_eps", "tau_sig", "beta"};
    case AttenuationKind::kZener:
      return {"tau_eps", "tau_sig"};
    case AttenuationKind::kKelvinVoigt:
      return {"tau_eps"};
    case AttenuationKind::kMaxwell:
      return {"eta"};
    case AttenuationKind::kKsb:
      return {"eta_q", "tau", "beta"};
    case AttenuationKind::kSzabo:
      return {"tau", "beta"};
    case AttenuationKind::kGeneralized:
      break;
  }
  throw ConstraintError("unknown attenuation kind");
}

Eigen::ArrayXcd bulk_modulus_field(const MediumGrid& grid, const ComplexFrequency& omega)
{
  Eigen::ArrayXcd field(grid.node_count());
  for (Eigen::Index i = 0; i < field.size(); ++i)
    field[i] = evaluate_bulk_modulus(attenuation_at(grid, i), grid.kappa0[i], omega);
  return field;
}

std::string_view parametrization_name(Parametrization param)
{
  switch (param)
  {
    case Parametrization::kKappaRho:
      return "kappa_rho";
    case Parametrization::kImpedanceRho:
      return "impedance_rho";
    case Parametrization::kSpeedRho:
      return "speed_rho";
    case Parametrization::kImpedanceSpeed:
      return "impedance_speed";
  }
  throw ConstraintError("unknown parametrization");
}

std::optional<Parametrization> parametrization_from_name(std::string_view name)
{
  for (const Parametrization p :
       {Parametrization::kKappaRho, Parametrization::kImpedanceRho, Parametrization::kSpeedRho,
        Parametrization::kImpedanceSpeed})
  {
    if (parametrization_name(p) == name)
      return p;
  }
  return std::nullopt;
}

FieldPair reparametrize(const FieldPair& fields, Parametrization from, Parametrization to)
{
  check_positive_fields(fields);
  if (from == to)
    return fields;

  const Eigen::ArrayXd& a = fields.first;
  const Eigen::ArrayXd& b = fields.second;
  FieldPair out;

  // Direct closed forms keep the rounding error of every conversion within a
  // couple of ulps; fields shared between the two parametrizations pass
  // through untouched.
  using P = Parametrization;
  switch (from)
  {
    case P::kKappaRho:  // a = kappa0, b = rho
      switch (to)
      {
        case P::kImpedanceRho:
          out.first = (a * b).sqrt();
          out.second = b;
          return out;
        case P::kSpeedRho:
          out.first = (a / b).sqrt();
          out.second = b;
          return out;
        case P::kImpedanceSpeed:
          out.first = (a * b).sqrt();
          out.second = (a / b).sqrt();
          return out;
        default:
          break;
      }
      break;
    case P::kImpedanceRho:  // a = I0, b = rho
      switch (to)
      {
        case P::kKappaRho:
          out.first = a.square() / b;
          out.second = b;
          return out;
        case P::kSpeedRho:
          out.first = a / b;
          out.second = b;
          return out;
        case P::kImpedanceSpeed:
          out.first = a;
          out.second = a / b;
          return out;
        default:
          break;
      }
      break;
    case P::kSpeedRho:  // a = c0, b = rho
      switch (to)
      {
        case P::kKappaRho:
          out.first = b * a.square();
          out.second = b;
          return out;
        case P::kImpedanceRho:
          out.first = a * b;
          out.second = b;
          return out;
        case P::kImpedanceSpeed:
          out.first = a * b;
          out.second = a;
          return out;
        default:
          break;
      }
      break;
    case P::kImpedanceSpeed:  // a = I0, b = c0
      switch (to)
      {
        case P::kKappaRho:
          out.first = a * b;
          out.second = a / b;
          return out;
        case P::kImpedanceRho:
          out.first = a;
          out.second = a / b;
          return out;
        case P::kSpeedRho:
          out.first = b;
          out.second = a / b;
          return out;
        default:
          break;
      }
      break;
  }
  throw ConstraintError("unknown parametrization");
}

FieldPair fields_of(const MediumGrid& grid, Parametrization param)
{
  FieldPair canonical{grid.kappa0, grid.rho};
  return reparametrize(canonical, Parametrization::kKappaRho, param);
}

MediumGrid with_fields(MediumGrid grid, const FieldPair& fields, Parametrization param)
{
  const FieldPair canonical = reparametrize(fields, param, Parametrization::kKappaRho);
  require(canonical.first.size() == grid.node_count(),
          "field arrays must match the grid's node count");
  grid.kappa0 = canonical.first;
  grid.rho = canonical.second;
  return grid;
}

MediumGrid build_phantom(const PhantomSpec& spec, AttenuationKind kind,
                         const ComplexFrequency& omega_ref, const FixedCoefficients& fixed)
{
  require(spec.nx >= 3 && spec.nz >= 3, "phantom requires at least 3 nodes per direction");
  require(spec.size_x > 0.0 && spec.size_z > 0.0, "phantom requires positive domain sizes");
  require(spec.perturbation >= 0.0 && spec.perturbation < 1.0,
          "perturbation amplitude must lie in [0, 1)");
  check_tissue(spec.background, "background");
  for (std::size_t l = 0; l < spec.layers.size(); ++l)
  {
    check_tissue(spec.layers[l].tissue, "layer " + std::to_string(l));
    require(spec.layers[l].z_min < spec.layers[l].z_max,
            "layer " + std::to_string(l) + " requires z_min < z_max");
  }
  if (spec.inclusion)
  {
    const PhantomEllipse& e = *spec.inclusion;
    check_tissue(e.tissue, "inclusion");
    require(e.semi_x > 0.0 && e.semi_z > 0.0, "inclusion requires positive semi-axes");
    require(e.center_x - e.semi_x >= 0.0 && e.center_x + e.semi_x <= spec.size_x &&
                e.center_z - e.semi_z >= 0.0 && e.center_z + e.semi_z <= spec.size_z,
            "inclusion ellipse must be contained in the domain");
  }

  MediumGrid grid;
  grid.nx = spec.nx;
  grid.nz = spec.nz;
  grid.dx = spec.size_x / (spec.nx - 1);
  grid.dz = spec.size_z / (spec.nz - 1);
  grid.atten_kind = kind;
  const Eigen::Index n = grid.node_count();
  grid.kappa0 = Eigen::ArrayXd(n);
  grid.rho = Eigen::ArrayXd(n);

  std::mt19937_64 rng(spec.seed);
  bool arrays_ready = false;
  for (int ix = 0; ix < grid.nx; ++ix)
  {
    for (int iz = 0; iz < grid.nz; ++iz)
    {
      const double x = grid.x_of(ix);
      const double z = grid.z_of(iz);

      const TissueValues* tissue = &spec.background;
      for (const PhantomLayer& layer : spec.layers)
        if (z >= layer.z_min && z < layer.z_max)
          tissue = &layer.tissue;
      if (spec.inclusion)
      {
        const PhantomEllipse& e = *spec.inclusion;
        const double ex = (x - e.center_x) / e.semi_x;
        const double ez = (z - e.center_z) / e.semi_z;
        if (ex * ex + ez * ez <= 1.0)
          tissue = &e.tissue;
      }

      double c0 = tissue->c0;
      double rho = tissue->rho;
      if (spec.perturbation > 0.0)
      {
        c0 *= 1.0 + spec.perturbation * symmetric_unit(rng);
        rho *= 1.0 + spec.perturbation * symmetric_unit(rng);
      }

      const Eigen::Index idx = grid.node(ix, iz);
      grid.kappa0[idx] = rho * c0 * c0;
      grid.rho[idx] = rho;

      const AttenuationSpec atten =
          calibrate_to_quality(kind, grid.kappa0[idx], tissue->q, omega_ref, fixed);
      const std::vector<double> coeffs = coefficients_of(atten);
      if (!arrays_ready)
      {
        grid.atten_coeffs.assign(coeffs.size(), Eigen::ArrayXd(n));
        arrays_ready = true;
      }
      for (std::size_t j = 0; j < coeffs.size(); ++j)
        grid.atten_coeffs[j][idx] = coeffs[j];
    }
  }
  return grid;
}

double relative_model_error(const Eigen::ArrayXd& c_true, const Eigen::ArrayXd& c_rec)
{
  require(c_true.size() == c_rec.size(), "model arrays must have matching shapes");
  for (Eigen::Index i = 0; i < c_true.size(); ++i)
    if (!(c_true[i] > 0.0))
      throw ConstraintError("reference model must be positive at node " + std::to_string(i));
  return std::sqrt(((c_true - c_rec) / c_true).square().sum());
}

}  // namespace viscotomo
