// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_INVERSION_HPP
#define VISCOTOMO_INVERSION_HPP

#include <Eigen/Core>
#include <limits>
#include <vector>

#include "viscotomo/data.hpp"
#include "viscotomo/frequency.hpp"
#include "viscotomo/medium.hpp"
#include "viscotomo/solver.hpp"

namespace viscotomo
{

// Least-squares data misfit: half the squared l2 norm of the residual between
// simulated and observed traces, summed over every (source, receiver) slot.
// The two data sets must be congruent: same trace count and, per index, the
// same source id, the same frequency, and the same number of receiver values;
// otherwise throws ValidityError.
[[nodiscard]] double misfit(const FrequencyData& simulated, const FrequencyData& observed);

// Gradient of the misfit with respect to the two nodal fields of a
// parametrization, one array per field in grid storage order.
struct GradientPair
{
  Eigen::ArrayXd first;
  Eigen::ArrayXd second;
};

// Adjoint-state gradient of misfit(simulated, observed) at the medium the
// system was assembled from. `system` must hold the factorization used for
// the forward solves, `fields` the per-source pressure solutions and
// `residuals` the per-source traces of simulated-minus-observed values, both
// ordered by ascending source id as produced by the forward map; `sampling`
// is the receiver operator on the same grid. One extra linear solve per
// source computes the adjoint field; the gradient then accumulates the
// derivative of every matrix entry (face couplings, volume terms, and the
// radiation diagonal on absorbing sides) against the forward/adjoint field
// pair, mapped to the requested parametrization by the exact chain rule.
// Throws ConstraintError when the inputs are inconsistent (frequency or shape
// mismatches, missing factorization).
[[nodiscard]] GradientPair adjoint_gradient(const HelmholtzSystem& system,
                                            const std::vector<Eigen::VectorXcd>& fields,
                                            const FrequencyData& residuals,
                                            const SparseComplex& sampling,
                                            const MediumGrid& medium, Parametrization param);

// Multiscale frequency sweep: for each angular frequency in ascending
// `omega_r_list`, every damping value in descending `omega_i_list` (outer
// loop over frequency, inner over damping). Throws ValidityError when either
// list is empty and ConstraintError when a list is not sorted as required, a
// frequency is not positive, or a damping value is negative.
[[nodiscard]] std::vector<ComplexFrequency> frequency_schedule(
    const std::vector<double>& omega_r_list, const std::vector<double>& omega_i_list);

// Backtracking line search controls. The first trial scales the update so
// that the largest relative model change is `initial_step`; each backtrack
// multiplies the step by `backtrack_factor` until the sufficient-decrease
// test J(m') <= J(m) + sufficient_decrease * <g, m' - m> passes (m' is the
// trial model after bound clamping) or `max_backtracks` extra trials fail.
// Accepted steps warm-start the next search one notch above the accepted
// scale, capped at `initial_step`.
struct LineSearchConfig
{
  double initial_step = 0.05;
  double backtrack_factor = 0.5;
  double sufficient_decrease = 1.0e-4;
  int max_backtracks = 20;
};

// Inclusive clamp range for an inverted field.
struct FieldBounds
{
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct InversionConfig
{
  std::vector<double> omega_r_list;       // ascending angular frequencies, rad/s
  std::vector<double> omega_i_list{0.0};  // descending damping values, rad/s
  int iters_per_frequency = 30;
  Parametrization parametrization = Parametrization::kSpeedRho;
  bool invert_first = true;   // update the first field of the parametrization
  bool invert_second = false; // update the second field
  LineSearchConfig line_search;
  FieldBounds first_bounds;
  FieldBounds second_bounds;
};

// One line of the inversion log. Iteration 0 records the state a frequency
// block starts from (its misfit; step and grad_norm are zero). Every later
// row reports the misfit after the iteration (unchanged when the line search
// failed), the accepted step scale (the largest per-field fractional model
// change before clamping; zero when rejected), and the l2 gradient norm at
// the iteration start.
struct IterationRecord
{
  int iteration = 0;
  ComplexFrequency omega{};
  double misfit = 0.0;
  double step = 0.0;
  double grad_norm = 0.0;
  bool accepted = false;
};

struct InversionHistory
{
  std::vector<IterationRecord> records;
};

struct InversionResult
{
  MediumGrid model;
  InversionHistory history;
};

// Frequency-continuation nonlinear conjugate-gradient inversion. For each
// scheduled frequency the observed traces are matched against the forward map
// of the current model and the selected fields are updated along
// Polak-Ribiere(+) directions with the backtracking line search; directions
// restart at steepest descent whenever they fail to descend, and a block ends
// early when even a steepest-descent line search cannot reduce the misfit.
// Updated fields are clamped to their bounds after every step. The observed
// data must contain, for every scheduled frequency, exactly one trace per
// configured source with one value per receiver. Throws ConstraintError for
// invalid configurations or incomplete data; the initial model and
// acquisition are validated by the forward map.
[[nodiscard]] InversionResult invert(const InversionConfig& config,
                                     const FrequencyData& observed, const MediumGrid& initial,
                                     const Acquisition& acquisition, const BoundarySpec& bcs,
                                     Complex amplitude = Complex{1.0, 0.0});

}  // namespace viscotomo

#endif  // VISCOTOMO_INVERSION_HPP
