// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#include "viscotomo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "viscotomo/errors.hpp"

namespace viscotomo
{

namespace
{

using ComplexL = std::complex<long double>;

// Extent of a node's dual cell along one axis: full spacing for interior
// nodes, half for the first and last node of the axis.
double half_width(int index, int count, double spacing)
{
  return (index == 0 || index == count - 1) ? 0.5 * spacing : spacing;
}

int nearest_index(double coordinate, double spacing, int count)
{
  const long index = std::lround(coordinate / spacing);
  return static_cast<int>(std::clamp(index, 0L, static_cast<long>(count - 1)));
}

void ensure_inside(const MediumGrid& medium, const Position& point, const char* role)
{
  if (!(point.x >= 0.0) || !(point.x <= medium.size_x()) || !(point.z >= 0.0) ||
      !(point.z <= medium.size_z()))
  {
    std::ostringstream message;
    message << role << " position (" << point.x << ", " << point.z
            << ") lies outside the domain [0, " << medium.size_x() << "] x [0, "
            << medium.size_z() << "]";
    throw ConstraintError(message.str());
  }
}

// Ascending power series of the first-kind Hankel function of order zero,
// evaluated in extended precision. Accurate to near working precision for
// |z| <= 16; beyond that the alternating terms grow too large before they
// decay and the asymptotic branch takes over.
ComplexL hankel0_ascending(ComplexL z)
{
  constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
  const ComplexL quarter_sq = 0.25L * z * z;
  ComplexL term{1.0L, 0.0L};
  ComplexL j0 = term;
  ComplexL y_inner{0.0L, 0.0L};
  long double harmonic = 0.0L;
  for (int m = 1; m <= 240; ++m)
  {
    term *= -quarter_sq / static_cast<long double>(m * m);
    harmonic += 1.0L / static_cast<long double>(m);
    j0 += term;
    y_inner -= term * harmonic;
    if (std::abs(term) * (1.0L + harmonic) < 1e-24L * (std::abs(j0) + 1.0L))
      break;
  }
  constexpr long double kPiL = std::numbers::pi_v<long double>;
  const ComplexL y0 = (2.0L / kPiL) * ((std::log(0.5L * z) + kEulerGamma) * j0 + y_inner);
  return j0 + ComplexL{0.0L, 1.0L} * y0;
}

// Large-argument asymptotic expansion of the same function, truncated at its
// smallest term. The truncation error at the |z| = 16 crossover is below
// 1e-13 relative and shrinks exponentially with |z|.
ComplexL hankel0_asymptotic(ComplexL z)
{
  const ComplexL minus_i{0.0L, -1.0L};
  ComplexL term{1.0L, 0.0L};
  ComplexL sum = term;
  long double smallest = std::abs(term);
  for (int m = 1; m <= 64; ++m)
  {
    const long double odd = 2.0L * static_cast<long double>(m) - 1.0L;
    term *= minus_i * (odd * odd) / (8.0L * static_cast<long double>(m) * z);
    const long double magnitude = std::abs(term);
    if (magnitude >= smallest)
      break;  // the divergent tail has started; stop at the smallest term
    sum += term;
    smallest = magnitude;
    if (magnitude < 1e-24L * std::abs(sum))
      break;
  }
  constexpr long double kPiL = std::numbers::pi_v<long double>;
  const ComplexL i{0.0L, 1.0L};
  return std::sqrt(2.0L / (kPiL * z)) * std::exp(i * (z - 0.25L * kPiL)) * sum;
}

int thread_count_from_env()
{
  const char* raw = std::getenv("VISCOTOMO_THREADS");
  if (raw == nullptr)
    return 1;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value <= 1)
    return 1;
  return static_cast<int>(std::min(value, 64L));
}

}  // namespace

HelmholtzSystem assemble_system(const MediumGrid& medium, const ComplexFrequency& omega,
                                const BoundarySpec& bcs)
{
  validate_medium(medium);
  if (!omega.admissible())
  {
    std::ostringstream message;
    message << "inadmissible frequency (omega_r = " << omega.omega_r
            << ", omega_i = " << omega.omega_i << "): need omega_r > 0 and omega_i >= 0";
    throw ValidityError(message.str());
  }
  const Eigen::Index node_count = medium.node_count();
  if (node_count > static_cast<Eigen::Index>(std::numeric_limits<int>::max()))
    throw ConstraintError("grid is too large for the sparse solver index type");

  const Eigen::ArrayXcd kappa = bulk_modulus_field(medium, omega);
  for (Eigen::Index c = 0; c < node_count; ++c)
  {
    const ValidityVerdict verdict =
        validate_attenuation(complex_wave_speed(kappa[c], medium.rho[c]), omega);
    if (!verdict)
    {
      std::ostringstream message;
      message << "attenuation law loses admissibility at node " << c << " (violated clause "
              << verdict.violated_clause << ")";
      throw ValidityError(message.str());
    }
  }

  const int nx = medium.nx;
  const int nz = medium.nz;
  const double dx = medium.dx;
  const double dz = medium.dz;
  const Complex omega_sq = omega.value() * omega.value();

  std::vector<Eigen::Triplet<Complex>> couplings;
  couplings.reserve(static_cast<std::size_t>(node_count) * 5);
  Eigen::VectorXcd diagonal = Eigen::VectorXcd::Zero(node_count);

  for (int i = 0; i < nx; ++i)
  {
    const double wx = half_width(i, nx, dx);
    for (int j = 0; j < nz; ++j)
    {
      const double wz = half_width(j, nz, dz);
      const int c = static_cast<int>(medium.node(i, j));
      diagonal[c] += omega_sq * (wx * wz) / kappa[c];
      if (i + 1 < nx)
      {
        const int nbr = static_cast<int>(medium.node(i + 1, j));
        const double w = 2.0 / (medium.rho[c] + medium.rho[nbr]) * wz / dx;
        couplings.emplace_back(c, nbr, Complex{w, 0.0});
        couplings.emplace_back(nbr, c, Complex{w, 0.0});
        diagonal[c] -= w;
        diagonal[nbr] -= w;
      }
      if (j + 1 < nz)
      {
        const int nbr = static_cast<int>(medium.node(i, j + 1));
        const double w = 2.0 / (medium.rho[c] + medium.rho[nbr]) * wx / dz;
        couplings.emplace_back(c, nbr, Complex{w, 0.0});
        couplings.emplace_back(nbr, c, Complex{w, 0.0});
        diagonal[c] -= w;
        diagonal[nbr] -= w;
      }
    }
  }

  // Radiating sides: the boundary flux i*omega*p/sqrt(rho*kappa) integrated
  // over the node's boundary face. Wall sides contribute nothing.
  const Complex i_omega = Complex{0.0, 1.0} * omega.value();
  const auto add_robin = [&](int i, int j, double face_length) {
    const Eigen::Index c = medium.node(i, j);
    diagonal[c] += i_omega * face_length / std::sqrt(medium.rho[c] * kappa[c]);
  };
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

  for (int c = 0; c < static_cast<int>(node_count); ++c)
    couplings.emplace_back(c, c, diagonal[c]);

  HelmholtzSystem system;
  system.nx = nx;
  system.nz = nz;
  system.dx = dx;
  system.dz = dz;
  system.omega = omega;
  system.boundaries = bcs;
  system.matrix.resize(node_count, node_count);
  system.matrix.setFromTriplets(couplings.begin(), couplings.end());
  system.matrix.makeCompressed();
  return system;
}

void factorize(HelmholtzSystem& system)
{
  if (system.matrix.rows() == 0)
    throw SolverError("cannot factorize an empty system");
  if (system.factorized())
    return;
  auto lu = std::make_shared<SparseFactorization>();
  lu->isSymmetric(true);
  lu->compute(system.matrix);
  if (lu->info() != Eigen::Success)
    throw SolverError("sparse factorization failed (" + lu->lastErrorMessage() +
                      "); the medium/frequency combination yields a singular operator");
  system.factorization = std::move(lu);
}

Eigen::VectorXcd solve(const HelmholtzSystem& system, const Eigen::VectorXcd& rhs)
{
  if (!system.factorized())
    throw SolverError("the system must be factorized before solving");
  if (rhs.size() != system.matrix.rows())
  {
    std::ostringstream message;
    message << "right-hand side has " << rhs.size() << " entries, expected "
            << system.matrix.rows();
    throw ConstraintError(message.str());
  }
  return system.factorization->solve(rhs);
}

Eigen::VectorXcd source_vector(const MediumGrid& medium, const ComplexFrequency& omega,
                               const SourceSpec& source, Complex amplitude)
{
  if (source.points.empty())
    throw ConstraintError("source " + std::to_string(source.id) +
                          " has no excitation points");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(medium.node_count());
  const Complex strength = Complex{0.0, 1.0} * omega.value() * amplitude;
  for (const Position& point : source.points)
  {
    ensure_inside(medium, point, "source");
    const int ix = nearest_index(point.x, medium.dx, medium.nx);
    const int iz = nearest_index(point.z, medium.dz, medium.nz);
    const double cell_fraction = half_width(ix, medium.nx, medium.dx) *
                                 half_width(iz, medium.nz, medium.dz) /
                                 (medium.dx * medium.dz);
    rhs[medium.node(ix, iz)] += strength * cell_fraction;
  }
  return rhs;
}

SparseComplex receiver_operator(const MediumGrid& medium, const std::vector<Position>& receivers)
{
  if (receivers.empty())
    throw ConstraintError("at least one receiver is required");
  std::vector<Eigen::Triplet<Complex>> weights;
  weights.reserve(receivers.size() * 4);
  for (std::size_t r = 0; r < receivers.size(); ++r)
  {
    const Position& point = receivers[r];
    ensure_inside(medium, point, "receiver");
    const int ix = std::clamp(static_cast<int>(std::floor(point.x / medium.dx)), 0,
                              medium.nx - 2);
    const int iz = std::clamp(static_cast<int>(std::floor(point.z / medium.dz)), 0,
                              medium.nz - 2);
    const double fx = point.x / medium.dx - ix;
    const double fz = point.z / medium.dz - iz;
    const int row = static_cast<int>(r);
    weights.emplace_back(row, static_cast<int>(medium.node(ix, iz)),
                         Complex{(1.0 - fx) * (1.0 - fz), 0.0});
    weights.emplace_back(row, static_cast<int>(medium.node(ix + 1, iz)),
                         Complex{fx * (1.0 - fz), 0.0});
    weights.emplace_back(row, static_cast<int>(medium.node(ix, iz + 1)),
                         Complex{(1.0 - fx) * fz, 0.0});
    weights.emplace_back(row, static_cast<int>(medium.node(ix + 1, iz + 1)),
                         Complex{fx * fz, 0.0});
  }
  SparseComplex sampling(static_cast<Eigen::Index>(receivers.size()), medium.node_count());
  sampling.setFromTriplets(weights.begin(), weights.end());
  sampling.makeCompressed();
  return sampling;
}

ForwardResult forward_map(const MediumGrid& medium, const ComplexFrequency& omega,
                          const Acquisition& acq, const BoundarySpec& bcs, Complex amplitude)
{
  if (acq.sources.empty())
    throw ConstraintError("acquisition needs at least one source");
  if (acq.receivers.empty())
    throw ConstraintError("acquisition needs at least one receiver");

  std::vector<std::size_t> order(acq.sources.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return acq.sources[a].id < acq.sources[b].id;
  });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (acq.sources[order[k]].id == acq.sources[order[k - 1]].id)
      throw ConstraintError("duplicate source id " +
                            std::to_string(acq.sources[order[k]].id));

  // Validate the full geometry and build all right-hand sides before paying
  // for the factorization.
  const SparseComplex sampling = receiver_operator(medium, acq.receivers);
  std::vector<Eigen::VectorXcd> rhs(order.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    rhs[k] = source_vector(medium, omega, acq.sources[order[k]], amplitude);

  HelmholtzSystem system = assemble_system(medium, omega, bcs);
  factorize(system);

  ForwardResult result;
  result.fields.resize(order.size());
  result.data.traces.resize(order.size());

  const auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k)
    {
      result.fields[k] = solve(system, rhs[k]);
      const Eigen::VectorXcd values = sampling * result.fields[k];
      FrequencyTrace& trace = result.data.traces[k];
      trace.source_id = acq.sources[order[k]].id;
      trace.omega = omega;
      trace.values.assign(values.data(), values.data() + values.size());
    }
  };

  const std::size_t thread_count =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count_from_env()), order.size());
  if (thread_count <= 1)
  {
    run_range(0, order.size());
  }
  else
  {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(thread_count);
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t)
    {
      const std::size_t begin = t * order.size() / thread_count;
      const std::size_t end = (t + 1) * order.size() / thread_count;
      pool.emplace_back([&, t, begin, end] {
        try
        {
          run_range(begin, end);
        }
        catch (...)
        {
          failures[t] = std::current_exception();
        }
      });
    }
    for (std::thread& worker : pool)
      worker.join();
    for (const std::exception_ptr& failure : failures)
      if (failure)
        std::rethrow_exception(failure);
  }

  result.system = std::move(system);
  return result;
}

Complex analytic_green_2d(Complex k, double r, double rho, const ComplexFrequency& omega)
{
  if (!(r > 0.0))
    throw ValidityError("the free-space solution is singular at r <= 0");
  const ComplexL z = ComplexL{k.real(), k.imag()} * static_cast<long double>(r);
  const ComplexL h0 = std::abs(z) <= 16.0L ? hankel0_ascending(z) : hankel0_asymptotic(z);
  const ComplexL value =
      0.25L * ComplexL{omega.omega_r, omega.omega_i} * static_cast<long double>(rho) * h0;
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

}  // namespace viscotomo
