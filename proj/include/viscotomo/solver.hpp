// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_SOLVER_HPP
#define VISCOTOMO_SOLVER_HPP

#include <Eigen/Sparse>
#include <cstdint>
#include <memory>
#include <vector>

#include "viscotomo/data.hpp"
#include "viscotomo/frequency.hpp"
#include "viscotomo/medium.hpp"

namespace viscotomo
{

//
// Frequency-domain acoustic propagation: the damped Helmholtz equation
//
//   div((1/rho) grad p) + (omega^2 / kappa) p = i*omega*g
//
// is discretized on the medium grid with a five-point stencil in conservation
// form (each row is the flux balance of the node's dual cell), which keeps the
// operator complex-symmetric under every boundary mix. A sparse direct
// factorization is computed once per (medium, frequency, boundary) triple and
// reused for every source.
//

struct Position
{
  double x = 0.0;  // m
  double z = 0.0;  // m
};

// One excitation: a single point, or several points fired simultaneously.
struct SourceSpec
{
  int id = 0;
  std::vector<Position> points;
};

// Sources and receivers of one experiment. All positions must lie inside the
// domain or on its boundary; source ids must be unique.
struct Acquisition
{
  std::vector<SourceSpec> sources;
  std::vector<Position> receivers;
};

enum class BoundaryCondition : std::uint8_t
{
  kAbsorbing = 0,  // first-order radiating condition dp/dn = (i*omega/c) p
  kWall = 1,       // rigid wall, dp/dn = 0
};

// Per-side boundary assignment. `left` is the x = 0 edge, `right` is
// x = size_x, `top` is z = 0 and `bottom` is z = size_z.
struct BoundarySpec
{
  BoundaryCondition left = BoundaryCondition::kAbsorbing;
  BoundaryCondition right = BoundaryCondition::kAbsorbing;
  BoundaryCondition top = BoundaryCondition::kAbsorbing;
  BoundaryCondition bottom = BoundaryCondition::kAbsorbing;

  [[nodiscard]] static BoundarySpec all_absorbing() { return {}; }
  [[nodiscard]] static BoundarySpec all_wall()
  {
    return {BoundaryCondition::kWall, BoundaryCondition::kWall, BoundaryCondition::kWall,
            BoundaryCondition::kWall};
  }
};

using SparseComplex = Eigen::SparseMatrix<Complex>;
using SparseFactorization = Eigen::SparseLU<SparseComplex, Eigen::COLAMDOrdering<int>>;

// An assembled (and optionally factorized) discrete Helmholtz operator. The
// matrix order equals the node count of the medium it was assembled from; the
// factorization, once computed, stays valid for exactly this matrix.
struct HelmholtzSystem
{
  int nx = 0;
  int nz = 0;
  double dx = 0.0;
  double dz = 0.0;
  ComplexFrequency omega;
  BoundarySpec boundaries;
  SparseComplex matrix;
  std::shared_ptr<const SparseFactorization> factorization;

  [[nodiscard]] bool factorized() const { return factorization != nullptr; }
};

// Discretizes the damped Helmholtz operator for one medium, frequency and
// boundary assignment. Inverse density is harmonically averaged onto cell
// faces; absorbing sides contribute the Robin flux i*omega/sqrt(rho*kappa)
// times the boundary face length to the diagonal, wall sides contribute
// nothing. Throws ConstraintError for an invalid medium and ValidityError for
// an inadmissible frequency or an attenuation law that loses admissibility at
// some node (the message names the node).
[[nodiscard]] HelmholtzSystem assemble_system(const MediumGrid& medium,
                                              const ComplexFrequency& omega,
                                              const BoundarySpec& bcs);

// Computes the sparse LU factorization in place. Idempotent; throws
// SolverError when the matrix is numerically singular.
void factorize(HelmholtzSystem& system);

// Solves A x = b against the stored factorization. Throws SolverError if the
// system has not been factorized and ConstraintError on a size mismatch.
[[nodiscard]] Eigen::VectorXcd solve(const HelmholtzSystem& system, const Eigen::VectorXcd& rhs);

// Right-hand side of one excitation: each point contributes
// i*omega*amplitude/(dx*dz), scaled by the dual-cell volume of the nearest
// node (so interior points add exactly i*omega*amplitude to their node's
// row). Throws ConstraintError for empty excitations or points outside the
// domain.
[[nodiscard]] Eigen::VectorXcd source_vector(const MediumGrid& medium,
                                             const ComplexFrequency& omega,
                                             const SourceSpec& source, Complex amplitude);

// Sparse bilinear sampling operator mapping a nodal field to receiver values,
// one row per receiver. Throws ConstraintError for receivers outside the
// domain.
[[nodiscard]] SparseComplex receiver_operator(const MediumGrid& medium,
                                              const std::vector<Position>& receivers);

// Forward-map output: receiver traces plus the full per-source fields, both
// ordered by ascending source id, and the factorized system for reuse.
struct ForwardResult
{
  FrequencyData data;
  std::vector<Eigen::VectorXcd> fields;
  HelmholtzSystem system;
};

// Runs the complete forward map: one assembly and factorization, then one
// solve per source (array sources are summed into a single right-hand side).
// Set the environment variable VISCOTOMO_THREADS to an integer > 1 to fan the
// per-source solves out over that many threads; results are bit-identical to
// the serial path. Throws ConstraintError for invalid acquisitions and
// propagates assembly/factorization errors.
[[nodiscard]] ForwardResult forward_map(const MediumGrid& medium, const ComplexFrequency& omega,
                                        const Acquisition& acq, const BoundarySpec& bcs,
                                        Complex amplitude);

// Free-space solution (omega*rho/4) * H0(k*r) of the damped Helmholtz
// equation for a unit-amplitude point source in a homogeneous medium, where
// H0 is the first-kind Hankel function of order zero. H0 is evaluated by the
// ascending power series for |k*r| <= 16 and by the large-argument asymptotic
// expansion (truncated at its smallest term) beyond. Throws ValidityError for
// r <= 0, where the solution is singular.
[[nodiscard]] Complex analytic_green_2d(Complex k, double r, double rho,
                                        const ComplexFrequency& omega);

}  // namespace viscotomo

#endif  // VISCOTOMO_SOLVER_HPP
