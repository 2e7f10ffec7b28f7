// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#include "viscotomo/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "viscotomo/errors.hpp"

namespace viscotomo
{

namespace
{

// Extent of a node's dual cell along one axis (mirrors the system assembly).
double half_width(int index, int count, double spacing)
{
  return (index == 0 || index == count - 1) ? 0.5 * spacing : spacing;
}

std::string frequency_label(const ComplexFrequency& omega)
{
  std::ostringstream oss;
  oss << "(omega_r = " << omega.omega_r << ", omega_i = " << omega.omega_i << ")";
  return oss.str();
}

void check_congruent(const FrequencyData& simulated, const FrequencyData& observed)
{
  if (simulated.traces.size() != observed.traces.size())
    throw ValidityError("data sets hold " + std::to_string(simulated.traces.size()) + " and " +
                        std::to_string(observed.traces.size()) +
                        " traces and cannot be compared");
  for (std::size_t t = 0; t < simulated.traces.size(); ++t)
  {
    const FrequencyTrace& sim = simulated.traces[t];
    const FrequencyTrace& obs = observed.traces[t];
    if (sim.source_id != obs.source_id || sim.omega.omega_r != obs.omega.omega_r ||
        sim.omega.omega_i != obs.omega.omega_i || sim.values.size() != obs.values.size())
    {
      std::ostringstream oss;
      oss << "trace " << t << " differs between the data sets (source " << sim.source_id
          << " vs " << obs.source_id << ", frequency " << frequency_label(sim.omega) << " vs "
          << frequency_label(obs.omega) << ", " << sim.values.size() << " vs "
          << obs.values.size() << " values)";
      throw ValidityError(oss.str());
    }
  }
}

void check_field_bounds(const FieldBounds& bounds, const char* which)
{
  if (!(bounds.lower >= 0.0) || !(bounds.upper > bounds.lower))
    throw ConstraintError(std::string("the ") + which +
                          "-field bounds must satisfy 0 <= lower < upper");
}

void validate_inversion_config(const InversionConfig& config)
{
  if (config.iters_per_frequency < 1)
    throw ConstraintError("iters_per_frequency must be at least 1");
  if (!config.invert_first && !config.invert_second)
    throw ConstraintError("at least one field of the parametrization must be inverted");
  const LineSearchConfig& ls = config.line_search;
  if (!(ls.initial_step > 0.0) || !std::isfinite(ls.initial_step))
    throw ConstraintError("initial_step must be positive and finite");
  if (!(ls.backtrack_factor > 0.0 && ls.backtrack_factor < 1.0))
    throw ConstraintError("backtrack_factor must lie in (0, 1)");
  if (!(ls.sufficient_decrease >= 0.0 && ls.sufficient_decrease < 1.0))
    throw ConstraintError("sufficient_decrease must lie in [0, 1)");
  if (ls.max_backtracks < 0)
    throw ConstraintError("max_backtracks must be nonnegative");
  check_field_bounds(config.first_bounds, "first");
  check_field_bounds(config.second_bounds, "second");
}

// Splits the observed traces into one complete, source-sorted block per
// scheduled frequency.
std::vector<FrequencyData> partition_observed(const FrequencyData& observed,
                                              const std::vector<ComplexFrequency>& schedule,
                                              const std::vector<int>& source_ids,
                                              std::size_t receiver_count)
{
  std::vector<FrequencyData> blocks(schedule.size());
  for (std::size_t k = 0; k < schedule.size(); ++k)
  {
    const ComplexFrequency& omega = schedule[k];
    FrequencyData& block = blocks[k];
    for (const FrequencyTrace& trace : observed.traces)
      if (trace.omega.omega_r == omega.omega_r && trace.omega.omega_i == omega.omega_i)
        block.traces.push_back(trace);
    if (block.traces.empty())
      throw ConstraintError("observed data has no traces for scheduled frequency " +
                            frequency_label(omega));
    std::sort(block.traces.begin(), block.traces.end(),
              [](const FrequencyTrace& a, const FrequencyTrace& b) {
                return a.source_id < b.source_id;
              });
    for (std::size_t q = 0; q < source_ids.size(); ++q)
    {
      if (q >= block.traces.size() || block.traces[q].source_id > source_ids[q])
        throw ConstraintError("observed data at " + frequency_label(omega) +
                              " is missing source " + std::to_string(source_ids[q]));
      if (block.traces[q].source_id < source_ids[q])
        throw ConstraintError("observed data at " + frequency_label(omega) +
                              " holds a trace for an unknown or duplicate source " +
                              std::to_string(block.traces[q].source_id));
    }
    if (block.traces.size() > source_ids.size())
      throw ConstraintError("observed data at " + frequency_label(omega) +
                            " holds more traces than there are sources");
    for (const FrequencyTrace& trace : block.traces)
      if (trace.values.size() != receiver_count)
        throw ConstraintError("observed trace for source " + std::to_string(trace.source_id) +
                              " at " + frequency_label(omega) + " carries " +
                              std::to_string(trace.values.size()) + " values, expected " +
                              std::to_string(receiver_count));
  }
  return blocks;
}

}  // namespace

double misfit(const FrequencyData& simulated, const FrequencyData& observed)
{
  check_congruent(simulated, observed);
  double sum = 0.0;
  for (std::size_t t = 0; t < simulated.traces.size(); ++t)
  {
    const FrequencyTrace& sim = simulated.traces[t];
    const FrequencyTrace& obs = observed.traces[t];
    for (std::size_t r = 0; r < sim.values.size(); ++r)
      sum += std::norm(sim.values[r] - obs.values[r]);
  }
  return 0.5 * sum;
}

GradientPair adjoint_gradient(const HelmholtzSystem& system,
                              const std::vector<Eigen::VectorXcd>& fields,
                              const FrequencyData& residuals, const SparseComplex& sampling,
                              const MediumGrid& medium, Parametrization param)
{
  const Eigen::Index node_count = medium.node_count();
  if (system.nx != medium.nx || system.nz != medium.nz || system.dx != medium.dx ||
      system.dz != medium.dz || system.matrix.rows() != node_count)
    throw ConstraintError("the system and the medium describe different grids");
  if (!system.factorized())
    throw ConstraintError("the system must be factorized before computing gradients");
  if (fields.size() != residuals.traces.size())
    throw ConstraintError("got " + std::to_string(fields.size()) + " pressure fields for " +
                          std::to_string(residuals.traces.size()) + " residual traces");
  if (sampling.cols() != node_count)
    throw ConstraintError("the receiver operator acts on a different grid");
  for (const FrequencyTrace& trace : residuals.traces)
  {
    if (trace.omega.omega_r != system.omega.omega_r ||
        trace.omega.omega_i != system.omega.omega_i)
      throw ConstraintError("residual trace for source " + std::to_string(trace.source_id) +
                            " carries frequency " + frequency_label(trace.omega) +
                            " but the system was assembled at " +
                            frequency_label(system.omega));
    if (static_cast<Eigen::Index>(trace.values.size()) != sampling.rows())
      throw ConstraintError("residual trace for source " + std::to_string(trace.source_id) +
                            " carries " + std::to_string(trace.values.size()) +
                            " values but the receiver operator has " +
                            std::to_string(sampling.rows()) + " rows");
  }
  for (const Eigen::VectorXcd& field : fields)
    if (field.size() != node_count)
      throw ConstraintError("a pressure field does not match the grid size");

  const int nx = medium.nx;
  const int nz = medium.nz;
  const double dx = medium.dx;
  const double dz = medium.dz;
  const Complex omega_sq = system.omega.value() * system.omega.value();
  const Complex i_omega = Complex{0.0, 1.0} * system.omega.value();

  // Complex modulus and its derivative with respect to the background
  // modulus. Every law scales linearly in kappa0 except the dashpot-in-series
  // law, whose modulus is harmonic in kappa0, giving the squared ratio.
  const Eigen::ArrayXcd kappa = bulk_modulus_field(medium, system.omega);
  Eigen::ArrayXcd modulus_derivative = kappa / medium.kappa0.cast<Complex>();
  if (medium.atten_kind == AttenuationKind::kMaxwell)
    modulus_derivative = modulus_derivative.square();

  // Source-independent derivative coefficients of the diagonal entries: the
  // volume term differentiated in kappa0 and the radiating-face term
  // differentiated in kappa0 and rho. Multiplied by p*mu and negated, these
  // are the per-node misfit derivatives.
  Eigen::ArrayXcd volume_coef(node_count);
  for (int i = 0; i < nx; ++i)
  {
    const double wx = half_width(i, nx, dx);
    for (int j = 0; j < nz; ++j)
    {
      const double wz = half_width(j, nz, dz);
      const Eigen::Index c = medium.node(i, j);
      volume_coef[c] = omega_sq * (wx * wz) * modulus_derivative[c] / (kappa[c] * kappa[c]);
    }
  }

  Eigen::ArrayXcd robin_rho_coef = Eigen::ArrayXcd::Zero(node_count);
  Eigen::ArrayXcd robin_kappa_coef = Eigen::ArrayXcd::Zero(node_count);
  const auto add_robin = [&](int i, int j, double face_length) {
    const Eigen::Index c = medium.node(i, j);
    const Complex entry = i_omega * face_length / std::sqrt(medium.rho[c] * kappa[c]);
    robin_rho_coef[c] += entry / (2.0 * medium.rho[c]);
    robin_kappa_coef[c] += entry * modulus_derivative[c] / (2.0 * kappa[c]);
  };
  const BoundarySpec& bcs = system.boundaries;
  if (bcs.left == BoundaryCondition::kAbsorbing)
    for (int j = 0; j < nz; ++j)
      add_robin(0, j, half_width(j, nz, dz));
  if (bcs.right == BoundaryCondition::kAbsorbing)
    for (int j = 0; j < nz; ++j)
      add_robin(nx - 1, j, half_width(j, nz, dz));
  if (bcs.top == BoundaryCondition::kAbsorbing)
    for (int i = 0; i < nx; ++i)
      add_robin(i, 0, half_width(i, nx, dx));
  if (bcs.bottom == BoundaryCondition::kAbsorbing)
    for (int i = 0; i < nx; ++i)
      add_robin(i, nz - 1, half_width(i, nx, dx));

  Eigen::ArrayXd g_kappa = Eigen::ArrayXd::Zero(node_count);
  Eigen::ArrayXd g_rho = Eigen::ArrayXd::Zero(node_count);

  for (std::size_t s = 0; s < fields.size(); ++s)
  {
    // Adjoint field: the matrix is complex-symmetric and the sampling weights
    // are real, so the conjugate-transposed solve reduces to one ordinary
    // solve against the conjugated residual.
    const FrequencyTrace& trace = residuals.traces[s];
    Eigen::VectorXcd residual(static_cast<Eigen::Index>(trace.values.size()));
    std::copy(trace.values.begin(), trace.values.end(), residual.data());
    const Eigen::VectorXcd rhs = sampling.transpose() * residual.conjugate();
    const Eigen::VectorXcd adjoint = solve(system, rhs);
    const Eigen::VectorXcd& p = fields[s];

    const Eigen::ArrayXcd pm = p.array() * adjoint.array();
    g_kappa += (volume_coef * pm).real() + (robin_kappa_coef * pm).real();
    g_rho += (robin_rho_coef * pm).real();

    // Face couplings depend symmetrically on the two densities they join.
    for (int i = 0; i < nx; ++i)
    {
      const double wx = half_width(i, nx, dx);
      for (int j = 0; j < nz; ++j)
      {
        const double wz = half_width(j, nz, dz);
        const Eigen::Index c = medium.node(i, j);
        if (i + 1 < nx)
        {
          const Eigen::Index nbr = medium.node(i + 1, j);
          const double rho_sum = medium.rho[c] + medium.rho[nbr];
          const double w = 2.0 / rho_sum * wz / dx;
          const double term =
              -(w / rho_sum) * ((p[c] - p[nbr]) * (adjoint[c] - adjoint[nbr])).real();
          g_rho[c] += term;
          g_rho[nbr] += term;
        }
        if (j + 1 < nz)
        {
          const Eigen::Index nbr = medium.node(i, j + 1);
          const double rho_sum = medium.rho[c] + medium.rho[nbr];
          const double w = 2.0 / rho_sum * wx / dz;
          const double term =
              -(w / rho_sum) * ((p[c] - p[nbr]) * (adjoint[c] - adjoint[nbr])).real();
          g_rho[c] += term;
          g_rho[nbr] += term;
        }
      }
    }
  }

  // Exact chain rule from (kappa0, rho) to the requested pair.
  GradientPair out;
  switch (param)
  {
    case Parametrization::kKappaRho:
      out.first = std::move(g_kappa);
      out.second = std::move(g_rho);
      break;
    case Parametrization::kImpedanceRho:
    {
      const Eigen::ArrayXd impedance = (medium.kappa0 * medium.rho).sqrt();
      out.first = g_kappa * 2.0 * impedance / medium.rho;
      out.second = g_rho - g_kappa * medium.kappa0 / medium.rho;
      break;
    }
    case Parametrization::kSpeedRho:
    {
      const Eigen::ArrayXd speed = (medium.kappa0 / medium.rho).sqrt();
      out.first = g_kappa * 2.0 * medium.rho * speed;
      out.second = g_rho + g_kappa * medium.kappa0 / medium.rho;
      break;
    }
    case Parametrization::kImpedanceSpeed:
    {
      const Eigen::ArrayXd speed = (medium.kappa0 / medium.rho).sqrt();
      out.first = g_kappa * speed + g_rho / speed;
      out.second = g_kappa * medium.rho * speed - g_rho * medium.rho / speed;
      break;
    }
  }
  if (out.first.size() != node_count)
    throw ConstraintError("unknown parametrization");
  return out;
}

std::vector<ComplexFrequency> frequency_schedule(const std::vector<double>& omega_r_list,
                                                 const std::vector<double>& omega_i_list)
{
  if (omega_r_list.empty())
    throw ValidityError("the frequency sweep needs at least one angular frequency");
  if (omega_i_list.empty())
    throw ValidityError("the frequency sweep needs at least one damping value");
  for (std::size_t k = 0; k < omega_r_list.size(); ++k)
  {
    if (!(omega_r_list[k] > 0.0))
      throw ConstraintError("angular frequencies must be positive");
    if (k > 0 && !(omega_r_list[k] > omega_r_list[k - 1]))
      throw ConstraintError("angular frequencies must be strictly ascending");
  }
  for (std::size_t k = 0; k < omega_i_list.size(); ++k)
  {
    if (!(omega_i_list[k] >= 0.0))
      throw ConstraintError("damping values must be nonnegative");
    if (k > 0 && !(omega_i_list[k] < omega_i_list[k - 1]))
      throw ConstraintError("damping values must be strictly descending");
  }
  std::vector<ComplexFrequency> schedule;
  schedule.reserve(omega_r_list.size() * omega_i_list.size());
  for (const double omega_r : omega_r_list)
    for (const double omega_i : omega_i_list)
      schedule.push_back(ComplexFrequency{omega_r, omega_i});
  return schedule;
}

InversionResult invert(const InversionConfig& config, const FrequencyData& observed,
                       const MediumGrid& initial, const Acquisition& acquisition,
                       const BoundarySpec& bcs, Complex amplitude)
{
  validate_inversion_config(config);
  const std::vector<ComplexFrequency> schedule =
      frequency_schedule(config.omega_r_list, config.omega_i_list);

  if (acquisition.sources.empty())
    throw ConstraintError("acquisition needs at least one source");
  if (acquisition.receivers.empty())
    throw ConstraintError("acquisition needs at least one receiver");
  std::vector<int> source_ids;
  source_ids.reserve(acquisition.sources.size());
  for (const SourceSpec& source : acquisition.sources)
    source_ids.push_back(source.id);
  std::sort(source_ids.begin(), source_ids.end());
  for (std::size_t k = 1; k < source_ids.size(); ++k)
    if (source_ids[k] == source_ids[k - 1])
      throw ConstraintError("duplicate source id " + std::to_string(source_ids[k]));

  const std::vector<FrequencyData> blocks =
      partition_observed(observed, schedule, source_ids, acquisition.receivers.size());

  MediumGrid current = initial;
  const SparseComplex sampling = receiver_operator(current, acquisition.receivers);
  InversionHistory history;

  const Eigen::Index n = current.node_count();
  const bool use_first = config.invert_first;
  const bool use_second = config.invert_second;
  const Eigen::Index total =
      n * (static_cast<Eigen::Index>(use_first) + static_cast<Eigen::Index>(use_second));
  const LineSearchConfig& ls = config.line_search;

  for (std::size_t block_idx = 0; block_idx < schedule.size(); ++block_idx)
  {
    const ComplexFrequency omega = schedule[block_idx];
    const FrequencyData& obs = blocks[block_idx];

    FieldPair fields = fields_of(current, config.parametrization);
    // Per-field normalization keeps the two inverted fields commensurate
    // inside one search vector; the scales are positive because the medium
    // validates as strictly positive.
    const double scale_first = use_first ? fields.first.abs().maxCoeff() : 1.0;
    const double scale_second = use_second ? fields.second.abs().maxCoeff() : 1.0;

    const auto pack_model = [&](const FieldPair& f) {
      Eigen::VectorXd m(total);
      Eigen::Index at = 0;
      if (use_first)
      {
        m.segment(at, n) = (f.first / scale_first).matrix();
        at += n;
      }
      if (use_second)
        m.segment(at, n) = (f.second / scale_second).matrix();
      return m;
    };
    const auto pack_gradient = [&](const GradientPair& g) {
      Eigen::VectorXd v(total);
      Eigen::Index at = 0;
      if (use_first)
      {
        v.segment(at, n) = (g.first * scale_first).matrix();
        at += n;
      }
      if (use_second)
        v.segment(at, n) = (g.second * scale_second).matrix();
      return v;
    };
    const auto unpack_clamped = [&](const Eigen::VectorXd& m) {
      FieldPair out = fields;  // non-inverted fields keep their block values
      Eigen::Index at = 0;
      if (use_first)
      {
        out.first = (m.segment(at, n).array() * scale_first)
                        .max(config.first_bounds.lower)
                        .min(config.first_bounds.upper);
        at += n;
      }
      if (use_second)
        out.second = (m.segment(at, n).array() * scale_second)
                         .max(config.second_bounds.lower)
                         .min(config.second_bounds.upper);
      return out;
    };

    ForwardResult forward = forward_map(current, omega, acquisition, bcs, amplitude);
    double current_misfit = misfit(forward.data, obs);
    history.records.push_back(IterationRecord{0, omega, current_misfit, 0.0, 0.0, true});

    Eigen::VectorXd model = pack_model(fields);
    Eigen::VectorXd previous_gradient;
    Eigen::VectorXd previous_direction;
    bool have_previous = false;
    double warm_step = ls.initial_step;

    for (int iteration = 1; iteration <= config.iters_per_frequency; ++iteration)
    {
      FrequencyData residuals = forward.data;
      for (std::size_t t = 0; t < residuals.traces.size(); ++t)
        for (std::size_t r = 0; r < residuals.traces[t].values.size(); ++r)
          residuals.traces[t].values[r] -= obs.traces[t].values[r];

      const GradientPair gradient_fields = adjoint_gradient(
          forward.system, forward.fields, residuals, sampling, current, config.parametrization);
      const Eigen::VectorXd gradient = pack_gradient(gradient_fields);

      double grad_norm_sq = 0.0;
      if (use_first)
        grad_norm_sq += gradient_fields.first.matrix().squaredNorm();
      if (use_second)
        grad_norm_sq += gradient_fields.second.matrix().squaredNorm();
      const double grad_norm = std::sqrt(grad_norm_sq);
      if (grad_norm == 0.0)
      {
        history.records.push_back(
            IterationRecord{iteration, omega, current_misfit, 0.0, grad_norm, false});
        break;  // stationary point (typically an exact data fit)
      }

      // Polak-Ribiere(+) direction, restarted whenever it fails to descend.
      Eigen::VectorXd direction;
      bool steepest = true;
      if (have_previous)
      {
        const double denom = previous_gradient.squaredNorm();
        const double beta =
            denom > 0.0
                ? std::max(0.0, gradient.dot(gradient - previous_gradient) / denom)
                : 0.0;
        if (beta > 0.0)
        {
          direction = -gradient + beta * previous_direction;
          steepest = false;
          if (direction.dot(gradient) >= 0.0)
          {
            steepest = true;
          }
        }
      }
      if (steepest)
        direction = -gradient;

      const double direction_scale = direction.cwiseAbs().maxCoeff();
      double step_scale = warm_step;
      bool accepted = false;
      for (int attempt = 0; attempt <= ls.max_backtracks && !accepted;
           ++attempt, step_scale *= ls.backtrack_factor)
      {
        const Eigen::VectorXd trial_model =
            model + (step_scale / direction_scale) * direction;
        const FieldPair trial_fields = unpack_clamped(trial_model);
        if ((use_first && !(trial_fields.first.minCoeff() > 0.0)) ||
            (use_second && !(trial_fields.second.minCoeff() > 0.0)))
          continue;

        // Sufficient decrease is measured against the clamped displacement,
        // so steps projected onto the bounds are judged by what they can
        // actually change.
        double directional = 0.0;
        if (use_first)
          directional += (gradient_fields.first * (trial_fields.first - fields.first)).sum();
        if (use_second)
          directional +=
              (gradient_fields.second * (trial_fields.second - fields.second)).sum();
        if (!(directional < 0.0))
          continue;

        MediumGrid trial_medium = with_fields(current, trial_fields, config.parametrization);
        ForwardResult trial_forward = forward_map(trial_medium, omega, acquisition, bcs,
                                                  amplitude);
        const double trial_misfit = misfit(trial_forward.data, obs);
        if (trial_misfit <= current_misfit + ls.sufficient_decrease * directional)
        {
          current = std::move(trial_medium);
          fields = trial_fields;
          model = pack_model(fields);
          forward = std::move(trial_forward);
          current_misfit = trial_misfit;
          history.records.push_back(
              IterationRecord{iteration, omega, current_misfit, step_scale, grad_norm, true});
          previous_gradient = gradient;
          previous_direction = std::move(direction);
          have_previous = true;
          warm_step = std::min(ls.initial_step, step_scale / ls.backtrack_factor);
          accepted = true;
        }
      }

      if (!accepted)
      {
        history.records.push_back(
            IterationRecord{iteration, omega, current_misfit, 0.0, grad_norm, false});
        if (steepest)
          break;  // even steepest descent cannot reduce the misfit here
        have_previous = false;
        warm_step = ls.initial_step;
      }
    }
  }

  return InversionResult{std::move(current), std::move(history)};
}

}  // namespace viscotomo
