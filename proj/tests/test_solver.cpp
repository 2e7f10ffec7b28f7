// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "viscotomo/errors.hpp"
#include "viscotomo/medium.hpp"
#include "viscotomo/solver.hpp"

using namespace viscotomo;

namespace
{

constexpr double kPi = std::numbers::pi;

// Homogeneous lossless water block, nx-by-nx nodes.
MediumGrid water_block(int nx, double dx, double c0 = 1500.0, double rho = 1000.0)
{
  PhantomSpec spec;
  spec.nx = nx;
  spec.nz = nx;
  spec.size_x = (nx - 1) * dx;
  spec.size_z = (nx - 1) * dx;
  spec.background = TissueValues{c0, rho, kInfiniteQ};
  return build_phantom(spec, AttenuationKind::kNone, frequency_from_hertz(300.0e3));
}

// Smoothly heterogeneous attenuating medium for symmetry-free checks.
MediumGrid heterogeneous_block(int nx)
{
  PhantomSpec spec;
  spec.nx = nx;
  spec.nz = nx;
  spec.size_x = 0.032;
  spec.size_z = 0.032;
  spec.background = TissueValues{1490.0, 1000.0, 400.0};
  spec.layers.push_back(PhantomLayer{0.010, 0.019, TissueValues{1580.0, 1060.0, 150.0}});
  spec.inclusion = PhantomEllipse{0.016, 0.015, 0.005, 0.004, TissueValues{1420.0, 960.0, 250.0}};
  spec.perturbation = 0.02;
  spec.seed = 31;
  return build_phantom(spec, AttenuationKind::kKelvinVoigt, frequency_from_hertz(300.0e3));
}

// The twelve lattice points at exact index distance 5 from a center node.
std::vector<Position> ring_receivers(const MediumGrid& grid, int cx, int cz, int radius_nodes,
                                     double scale)
{
  const double sq = radius_nodes * radius_nodes * scale * scale;
  std::vector<Position> ring;
  for (int di = -radius_nodes; di <= radius_nodes; ++di)
  {
    for (int dj = -radius_nodes; dj <= radius_nodes; ++dj)
    {
      if (std::abs(di * di * scale * scale + dj * dj * scale * scale - sq) < 1e-12 &&
          (di != 0 || dj != 0))
        ring.push_back(Position{grid.x_of(cx + di), grid.z_of(cz + dj)});
    }
  }
  return ring;
}

// Relative l2 mismatch between solved receiver traces and the analytic
// free-space solution, on a refined copy of the base 10-nodes-per-wavelength
// problem. `refine` doubles the resolution while the physical domain, source,
// receiver ring (radius 0.4 wavelengths, general position), and frequency
// stay fixed, so successive levels measure the same observable. Damping
// keeps the residual reflections of the first-order radiating boundary well
// below the discretization error being measured.
double green_mismatch(int refine)
{
  const int base_nx = 64;
  const double base_dx = 0.5e-3;
  const int nx = ((base_nx - 1) << refine) + 1;
  const double dx = base_dx / (1 << refine);
  const MediumGrid grid = water_block(nx, dx);

  const double center = grid.x_of(32 << refine);
  const ComplexFrequency omega = frequency_from_hertz(300.0e3, 0.1 * 2.0 * kPi * 300.0e3);

  Acquisition acq;
  acq.sources.push_back(SourceSpec{0, {Position{center, center}}});
  const int receiver_count = 16;
  const double radius = 4.0 * base_dx;
  for (int a = 0; a < receiver_count; ++a)
  {
    const double angle = 2.0 * kPi * a / receiver_count + 0.13;
    acq.receivers.push_back(
        Position{center + radius * std::cos(angle), center + radius * std::sin(angle)});
  }

  const Complex amplitude{1.0, 0.0};
  const ForwardResult result =
      forward_map(grid, omega, acq, BoundarySpec::all_absorbing(), amplitude);

  const Complex k = omega.value() / 1500.0;
  double num = 0.0, den = 0.0;
  for (std::size_t r = 0; r < acq.receivers.size(); ++r)
  {
    const double rx = acq.receivers[r].x - center;
    const double rz = acq.receivers[r].z - center;
    const Complex expected = amplitude * analytic_green_2d(k, std::hypot(rx, rz), 1000.0, omega);
    num += std::norm(result.data.traces[0].values[r] - expected);
    den += std::norm(expected);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("free-space solution matches the standard library Bessel functions on the real axis")
{
  // Both evaluation branches and the crossover seam, via H0 = J0 + i*Y0.
  const double rho = 1000.0;
  const ComplexFrequency omega{2.0 * kPi * 3.0e5, 0.0};
  for (double z = 0.3; z < 120.0; z += 0.37)
  {
    const double r = 1.7e-3;
    const Complex k{z / r, 0.0};
    const Complex got = analytic_green_2d(k, r, rho, omega);
    const Complex h0{std::cyl_bessel_j(0.0, z), std::cyl_neumann(0.0, z)};
    const Complex expected = omega.value() * rho / 4.0 * h0;
    CHECK(std::abs(got - expected) <= 1e-10 * std::abs(expected));
  }
}

TEST_CASE("free-space solution matches the extended-precision series for complex arguments")
{
  const double rho = 1200.0;
  const ComplexFrequency omega{1.1e6, 3.0e4};
  const Complex zs[] = {{0.01, 0.0}, {0.1, 0.02}, {1.0, 0.3}, {3.0, 1.0}, {9.0, 2.5}, {14.0, 0.5}};
  for (const Complex z : zs)
  {
    const double r = 2.1e-3;
    const Complex k = z / r;
    const Complex got = analytic_green_2d(k, r, rho, omega);
    const oracles::CompLD h = oracles::hankel0_series(oracles::CompLD{z.real(), z.imag()});
    const Complex expected = omega.value() * rho / 4.0 *
                             Complex{static_cast<double>(h.real()), static_cast<double>(h.imag())};
    CHECK(std::abs(got - expected) <= 1e-11 * std::abs(expected));
  }
}

TEST_CASE("free-space solution follows the leading asymptotics at large argument")
{
  const double rho = 1000.0;
  const ComplexFrequency omega{2.0 * kPi * 3.0e5, 0.0};
  const double scale = std::abs(omega.value()) * rho / 4.0;

  for (const double z : {20.5, 50.0, 300.0})
  {
    const double r = 1.0e-2;
    const Complex got = analytic_green_2d(Complex{z / r, 0.0}, r, rho, omega);
    CHECK(std::abs(got) / scale == doctest::Approx(std::sqrt(2.0 / (kPi * z))).epsilon(0.01));
  }

  // A lossy wavenumber decays like exp(-Im(k) r) on top of the 1/sqrt decay.
  const double r = 1.0;
  const Complex k{40.0, 3.0};
  const Complex got = analytic_green_2d(k, r, rho, omega);
  const double expected_mag = std::sqrt(2.0 / (kPi * std::abs(k) * r)) * std::exp(-k.imag() * r);
  CHECK(std::abs(got) / scale == doctest::Approx(expected_mag).epsilon(0.02));

  const auto at_radius = [&](double rr) { static_cast<void>(analytic_green_2d(k, rr, rho, omega)); };
  CHECK_THROWS_AS(at_radius(0.0), ValidityError);
  CHECK_THROWS_AS(at_radius(-1.0), ValidityError);
}

TEST_CASE("assembled operator is complex-symmetric under any boundary mix")
{
  const MediumGrid grid = heterogeneous_block(24);
  BoundarySpec bcs;
  bcs.left = BoundaryCondition::kAbsorbing;
  bcs.right = BoundaryCondition::kWall;
  bcs.top = BoundaryCondition::kWall;
  bcs.bottom = BoundaryCondition::kAbsorbing;

  const HelmholtzSystem system =
      assemble_system(grid, frequency_from_hertz(300.0e3, 2.0e4), bcs);
  Eigen::SparseMatrix<Complex> diff = system.matrix;
  const Eigen::SparseMatrix<Complex> transposed = system.matrix.transpose();
  diff -= transposed;
  double max_abs = 0.0;
  for (int col = 0; col < diff.outerSize(); ++col)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(diff, col); it; ++it)
      max_abs = std::max(max_abs, std::abs(it.value()));
  CHECK(max_abs == 0.0);
}

TEST_CASE("raising the damping rate strengthens the dissipative diagonal")
{
  // On a lossless wall-bounded medium the only imaginary diagonal contribution
  // is the volume term, whose imaginary part grows with the damping rate.
  const MediumGrid grid = water_block(12, 1.0e-3);
  const auto diagonal = [&](double omega_i) {
    return Eigen::VectorXcd(
        assemble_system(grid, frequency_from_hertz(300.0e3, omega_i), BoundarySpec::all_wall())
            .matrix.diagonal());
  };
  const Eigen::VectorXcd slow = diagonal(1.0e4);
  const Eigen::VectorXcd fast = diagonal(2.0e4);
  for (Eigen::Index c = 0; c < slow.size(); ++c)
  {
    CHECK(slow[c].imag() > 0.0);
    CHECK(fast[c].imag() > slow[c].imag());
  }
}

TEST_CASE("forward map matches the free-space solution and converges at second order")
{
  const double coarse = green_mismatch(0);
  const double medium_level = green_mismatch(1);
  const double fine = green_mismatch(2);

  CHECK(coarse <= 0.05);
  const double order1 = std::log2(coarse / medium_level);
  const double order2 = std::log2(medium_level / fine);
  CHECK(order1 >= 1.8);
  CHECK(order2 >= 1.8);
}

TEST_CASE("traces obey source-receiver reciprocity on a heterogeneous medium")
{
  const MediumGrid grid = heterogeneous_block(64);
  const ComplexFrequency omega = frequency_from_hertz(250.0e3, 1.0e4);
  const Position a{grid.x_of(14), grid.z_of(17)};
  const Position b{grid.x_of(49), grid.z_of(41)};

  Acquisition forward;
  forward.sources.push_back(SourceSpec{0, {a}});
  forward.receivers = {b};
  Acquisition swapped;
  swapped.sources.push_back(SourceSpec{0, {b}});
  swapped.receivers = {a};

  const Complex amp{0.7, -0.4};
  const Complex t_ab =
      forward_map(grid, omega, forward, BoundarySpec::all_absorbing(), amp).data.traces[0].values[0];
  const Complex t_ba =
      forward_map(grid, omega, swapped, BoundarySpec::all_absorbing(), amp).data.traces[0].values[0];
  CHECK(std::abs(t_ab - t_ba) <= 1e-8 * std::abs(t_ab));
}

TEST_CASE("center source in a wall-bounded homogeneous square yields a symmetric field")
{
  const int nx = 41;
  const MediumGrid grid = water_block(nx, 0.5e-3);
  const ComplexFrequency omega = frequency_from_hertz(307.0e3);

  Acquisition acq;
  acq.sources.push_back(SourceSpec{0, {Position{grid.x_of(20), grid.z_of(20)}}});
  acq.receivers = {Position{grid.x_of(20), grid.z_of(20)}};

  const ForwardResult result =
      forward_map(grid, omega, acq, BoundarySpec::all_wall(), Complex{1.0, 0.0});
  const Eigen::VectorXcd& p = result.fields[0];
  const double scale = p.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < i; ++j)
      worst = std::max(worst, std::abs(p[grid.node(i, j)] - p[grid.node(j, i)]));
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("wall boundaries trap more energy than absorbing ones")
{
  const MediumGrid grid = water_block(48, 0.5e-3);
  const ComplexFrequency omega = frequency_from_hertz(290.0e3);

  Acquisition acq;
  acq.sources.push_back(SourceSpec{0, {Position{grid.x_of(24), grid.z_of(24)}}});
  for (int i = 6; i < 42; i += 3)
    acq.receivers.push_back(Position{grid.x_of(i), grid.z_of(10)});

  const auto energy = [&](const BoundarySpec& bcs) {
    const ForwardResult result = forward_map(grid, omega, acq, bcs, Complex{1.0, 0.0});
    double e = 0.0;
    for (const Complex v : result.data.traces[0].values)
      e += std::norm(v);
    return e;
  };
  CHECK(energy(BoundarySpec::all_wall()) > energy(BoundarySpec::all_absorbing()));
}

TEST_CASE("raising the damping rate strictly reduces received energy")
{
  const MediumGrid grid = water_block(48, 0.5e-3);
  // Receivers beyond one wavelength (lambda = 5 mm) from the center source.
  Acquisition acq;
  acq.sources.push_back(SourceSpec{0, {Position{grid.x_of(24), grid.z_of(24)}}});
  acq.receivers = ring_receivers(grid, 24, 24, 15, 1.0);
  REQUIRE(!acq.receivers.empty());

  double previous = std::numeric_limits<double>::infinity();
  for (const double omega_i : {0.0, 1.0e4, 5.0e4, 2.0e5})
  {
    const ForwardResult result = forward_map(grid, frequency_from_hertz(300.0e3, omega_i), acq,
                                             BoundarySpec::all_absorbing(), Complex{1.0, 0.0});
    double e = 0.0;
    for (const Complex v : result.data.traces[0].values)
      e += std::norm(v);
    CHECK(e < previous);
    previous = e;
  }
}

TEST_CASE("an array source equals the superposition of its member points")
{
  const MediumGrid grid = heterogeneous_block(48);
  const ComplexFrequency omega = frequency_from_hertz(220.0e3, 5.0e3);
  const std::vector<Position> points = {Position{grid.x_of(10), grid.z_of(12)},
                                        Position{grid.x_of(24), grid.z_of(8)},
                                        Position{grid.x_of(37), grid.z_of(30)}};
  Acquisition acq;
  acq.receivers = ring_receivers(grid, 24, 24, 13, 1.0);
  acq.sources.push_back(SourceSpec{5, points});
  for (int s = 0; s < 3; ++s)
    acq.sources.push_back(SourceSpec{s + 10, {points[static_cast<std::size_t>(s)]}});

  const ForwardResult result =
      forward_map(grid, omega, acq, BoundarySpec::all_absorbing(), Complex{1.0, 0.0});
  REQUIRE(result.data.traces.size() == 4);
  CHECK(result.data.traces[0].source_id == 5);

  for (std::size_t r = 0; r < acq.receivers.size(); ++r)
  {
    const Complex array_value = result.data.traces[0].values[r];
    const Complex summed = result.data.traces[1].values[r] + result.data.traces[2].values[r] +
                           result.data.traces[3].values[r];
    CHECK(std::abs(array_value - summed) <= 1e-12 * std::abs(array_value));
  }
}

TEST_CASE("forward results are merged in ascending source-id order")
{
  const MediumGrid grid = water_block(32, 0.5e-3);
  Acquisition acq;
  acq.sources.push_back(SourceSpec{7, {Position{grid.x_of(20), grid.z_of(16)}}});
  acq.sources.push_back(SourceSpec{3, {Position{grid.x_of(10), grid.z_of(16)}}});
  acq.receivers = {Position{grid.x_of(16), grid.z_of(26)}};

  const ForwardResult result = forward_map(grid, frequency_from_hertz(300.0e3), acq,
                                           BoundarySpec::all_absorbing(), Complex{1.0, 0.0});
  REQUIRE(result.data.traces.size() == 2);
  CHECK(result.data.traces[0].source_id == 3);
  CHECK(result.data.traces[1].source_id == 7);

  // Re-running with the sources already sorted gives bit-identical traces.
  std::swap(acq.sources[0], acq.sources[1]);
  const ForwardResult sorted = forward_map(grid, frequency_from_hertz(300.0e3), acq,
                                           BoundarySpec::all_absorbing(), Complex{1.0, 0.0});
  for (std::size_t t = 0; t < 2; ++t)
  {
    CHECK(sorted.data.traces[t].values[0].real() == result.data.traces[t].values[0].real());
    CHECK(sorted.data.traces[t].values[0].imag() == result.data.traces[t].values[0].imag());
  }
}

TEST_CASE("factorized systems solve deterministically to tight residuals")
{
  const MediumGrid grid = water_block(64, 0.5e-3);
  HelmholtzSystem system =
      assemble_system(grid, frequency_from_hertz(300.0e3), BoundarySpec::all_absorbing());
  CHECK(!system.factorized());
  factorize(system);
  CHECK(system.factorized());

  std::mt19937_64 rng(8u);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  Eigen::VectorXcd b(system.matrix.rows());
  for (Eigen::Index i = 0; i < b.size(); ++i)
    b[i] = Complex{amp(rng), amp(rng)};

  const Eigen::VectorXcd x1 = solve(system, b);
  const Eigen::VectorXcd x2 = solve(system, b);
  for (Eigen::Index i = 0; i < b.size(); ++i)
  {
    CHECK(x1[i].real() == x2[i].real());
    CHECK(x1[i].imag() == x2[i].imag());
  }
  const double residual = (system.matrix * x1 - b).norm() / b.norm();
  CHECK(residual <= 1e-10);
}

TEST_CASE("solves reuse the factorization at a small fraction of its cost")
{
  const MediumGrid grid = water_block(128, 0.25e-3);
  HelmholtzSystem system =
      assemble_system(grid, frequency_from_hertz(300.0e3), BoundarySpec::all_absorbing());

  namespace chrono = std::chrono;
  const auto t0 = chrono::steady_clock::now();
  factorize(system);
  const auto t1 = chrono::steady_clock::now();

  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(system.matrix.rows());
  b[system.matrix.rows() / 2] = Complex{0.0, 1.0};
  Eigen::VectorXcd x;
  const int solves = 5;
  const auto t2 = chrono::steady_clock::now();
  for (int s = 0; s < solves; ++s)
  {
    b[64] = Complex{static_cast<double>(s), 1.0};  // defeat any caching
    x = solve(system, b);
  }
  const auto t3 = chrono::steady_clock::now();

  const double factor_time = chrono::duration<double>(t1 - t0).count();
  const double solve_time = chrono::duration<double>(t3 - t2).count() / solves;
  CHECK(solve_time < 0.10 * factor_time);
  CHECK(x.allFinite());
}

TEST_CASE("assembly rejects invalid media and inadmissible frequencies")
{
  MediumGrid grid = build_phantom(
      [] {
        PhantomSpec spec;
        spec.nx = 8;
        spec.nz = 8;
        spec.size_x = spec.size_z = 0.02;
        spec.background = TissueValues{1500.0, 1000.0, 100.0};
        return spec;
      }(),
      AttenuationKind::kZener, frequency_from_hertz(300.0e3),
      [] {
        FixedCoefficients fixed;
        fixed.tau_sig = 8.54e-8;
        return fixed;
      }());

  const auto assemble = [](const MediumGrid& m, const ComplexFrequency& w) {
    static_cast<void>(assemble_system(m, w, BoundarySpec::all_absorbing()));
  };

  CHECK_THROWS_AS(assemble(grid, ComplexFrequency{0.0, 0.0}), ValidityError);
  CHECK_THROWS_AS(assemble(grid, ComplexFrequency{1.0e6, -2.0}), ValidityError);

  grid.atten_coeffs[0][4] = 0.5 * grid.atten_coeffs[1][4];  // tau_eps < tau_sig
  CHECK_THROWS_WITH_AS(assemble(grid, frequency_from_hertz(300.0e3)), doctest::Contains("node 4"),
                       ConstraintError);
}

TEST_CASE("acquisition geometry is validated against the medium")
{
  const MediumGrid grid = water_block(16, 1.0e-3);
  const ComplexFrequency omega = frequency_from_hertz(300.0e3);
  const auto run = [&](const Acquisition& acq) {
    static_cast<void>(forward_map(grid, omega, acq, BoundarySpec::all_absorbing(), Complex{1.0, 0.0}));
  };

  Acquisition acq;
  CHECK_THROWS_AS(run(acq), ConstraintError);  // no sources

  acq.sources.push_back(SourceSpec{0, {Position{0.005, 0.005}}});
  CHECK_THROWS_AS(run(acq), ConstraintError);  // no receivers

  acq.receivers = {Position{0.016, 0.005}};
  CHECK_THROWS_AS(run(acq), ConstraintError);  // receiver outside the 15 mm domain

  acq.receivers = {Position{0.005, 0.010}};
  CHECK_NOTHROW(run(acq));

  acq.sources.push_back(SourceSpec{0, {Position{0.002, 0.002}}});
  CHECK_THROWS_AS(run(acq), ConstraintError);  // duplicate source id

  acq.sources[1] = SourceSpec{1, {}};
  CHECK_THROWS_AS(run(acq), ConstraintError);  // empty excitation

  acq.sources[1] = SourceSpec{1, {Position{-0.001, 0.002}}};
  CHECK_THROWS_AS(run(acq), ConstraintError);  // source outside the domain
}

TEST_CASE("threaded and serial forward maps agree bit for bit")
{
  const MediumGrid grid = heterogeneous_block(40);
  const ComplexFrequency omega = frequency_from_hertz(260.0e3, 8.0e3);
  Acquisition acq;
  for (int s = 0; s < 5; ++s)
    acq.sources.push_back(SourceSpec{s, {Position{grid.x_of(6 + 7 * s), grid.z_of(8 + 5 * s)}}});
  for (int r = 4; r < 36; r += 4)
    acq.receivers.push_back(Position{grid.x_of(r), grid.z_of(33)});

  const ForwardResult serial =
      forward_map(grid, omega, acq, BoundarySpec::all_absorbing(), Complex{1.0, 0.0});
  REQUIRE(setenv("VISCOTOMO_THREADS", "3", 1) == 0);
  const ForwardResult threaded =
      forward_map(grid, omega, acq, BoundarySpec::all_absorbing(), Complex{1.0, 0.0});
  REQUIRE(unsetenv("VISCOTOMO_THREADS") == 0);

  REQUIRE(threaded.data.traces.size() == serial.data.traces.size());
  for (std::size_t t = 0; t < serial.data.traces.size(); ++t)
  {
    CHECK(threaded.data.traces[t].source_id == serial.data.traces[t].source_id);
    for (std::size_t r = 0; r < serial.data.traces[t].values.size(); ++r)
    {
      CHECK(threaded.data.traces[t].values[r].real() == serial.data.traces[t].values[r].real());
      CHECK(threaded.data.traces[t].values[r].imag() == serial.data.traces[t].values[r].imag());
    }
  }
}

TEST_CASE("sources snap to the nearest node")
{
  const MediumGrid grid = water_block(32, 1.0e-3);
  const ComplexFrequency omega = frequency_from_hertz(300.0e3);
  Acquisition acq;
  acq.receivers = {Position{grid.x_of(25), grid.z_of(25)}};

  acq.sources = {SourceSpec{0, {Position{grid.x_of(10), grid.z_of(10)}}}};
  const Complex exact = forward_map(grid, omega, acq, BoundarySpec::all_absorbing(),
                                    Complex{1.0, 0.0})
                            .data.traces[0]
                            .values[0];
  acq.sources = {SourceSpec{0, {Position{grid.x_of(10) + 0.4e-3, grid.z_of(10) - 0.3e-3}}}};
  const Complex snapped = forward_map(grid, omega, acq, BoundarySpec::all_absorbing(),
                                      Complex{1.0, 0.0})
                              .data.traces[0]
                              .values[0];
  CHECK(exact.real() == snapped.real());
  CHECK(exact.imag() == snapped.imag());
}
