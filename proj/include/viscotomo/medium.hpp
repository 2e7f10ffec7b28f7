// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_MEDIUM_HPP
#define VISCOTOMO_MEDIUM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "viscotomo/attenuation.hpp"
#include "viscotomo/frequency.hpp"

namespace viscotomo
{

// Gridded material model on nx-by-nz collocated nodes. Node (ix, iz) sits at
// (ix*dx, iz*dz) and is stored at flat index ix*nz + iz (row-major with z
// fastest, matching the binary grid format). One attenuation model kind
// applies to the whole grid; its coefficients vary per node, one array per
// coefficient in the order given by coefficient_names.
struct MediumGrid
{
  int nx = 0;
  int nz = 0;
  double dx = 0.0;  // m
  double dz = 0.0;  // m
  AttenuationKind atten_kind = AttenuationKind::kNone;
  Eigen::ArrayXd kappa0;  // background bulk modulus, Pa
  Eigen::ArrayXd rho;     // density, kg/m^3
  std::vector<Eigen::ArrayXd> atten_coeffs;

  [[nodiscard]] Eigen::Index node(int ix, int iz) const
  {
    return static_cast<Eigen::Index>(ix) * nz + iz;
  }
  [[nodiscard]] Eigen::Index node_count() const
  {
    return static_cast<Eigen::Index>(nx) * nz;
  }
  [[nodiscard]] double x_of(int ix) const { return ix * dx; }
  [[nodiscard]] double z_of(int iz) const { return iz * dz; }
  [[nodiscard]] double size_x() const { return (nx - 1) * dx; }
  [[nodiscard]] double size_z() const { return (nz - 1) * dz; }
};

// Checks grid shape, positivity of kappa0 and rho, the coefficient array
// layout, and the per-node model coefficient conditions. Throws
// ConstraintError naming the first offending node.
void validate_medium(const MediumGrid& grid);

// The attenuation model evaluated at one node, assembled from the per-node
// coefficient arrays.
[[nodiscard]] AttenuationSpec attenuation_at(const MediumGrid& grid, Eigen::Index node);

// Flat coefficient list of a model instance, in storage order.
[[nodiscard]] std::vector<double> coefficients_of(const AttenuationSpec& spec);

// Storage-order coefficient names for a model kind holding `count` arrays
// (e.g. {"tau_eps", "tau_sig"} for the standard linear solid). Throws
// ConstraintError if `count` is not valid for the kind; the superposition
// model accepts any even count as "omega_l"/"b_l" pairs.
[[nodiscard]] std::vector<std::string> coefficient_names(AttenuationKind kind,
                                                         std::size_t count);

// Complex bulk modulus at every node for one frequency.
[[nodiscard]] Eigen::ArrayXcd bulk_modulus_field(const MediumGrid& grid,
                                                 const ComplexFrequency& omega);

// The four inverted parameter pairs: (kappa0, rho), (I0, rho), (c0, rho) and
// (I0, c0), related by kappa0 = I0*c0, rho = I0/c0, c0 = sqrt(kappa0/rho),
// I0 = sqrt(kappa0*rho).
enum class Parametrization : std::uint8_t
{
  kKappaRho = 0,
  kImpedanceRho = 1,
  kSpeedRho = 2,
  kImpedanceSpeed = 3,
};

[[nodiscard]] std::string_view parametrization_name(Parametrization param);
[[nodiscard]] std::optional<Parametrization> parametrization_from_name(std::string_view name);

// A pair of nodal fields under some parametrization.
struct FieldPair
{
  Eigen::ArrayXd first;
  Eigen::ArrayXd second;
};

// Exact algebraic conversion between parametrizations. Converting a pair to
// its own parametrization returns it unchanged; every other conversion uses
// the direct closed form, so round trips agree to a few ulps. Throws
// ConstraintError for mismatched array lengths or nonpositive values, naming
// the first offending node.
[[nodiscard]] FieldPair reparametrize(const FieldPair& fields, Parametrization from,
                                      Parametrization to);

// The grid's material fields expressed in a parametrization.
[[nodiscard]] FieldPair fields_of(const MediumGrid& grid, Parametrization param);

// A copy of the grid with kappa0 and rho replaced by the given fields
// (attenuation coefficients are kept as-is).
[[nodiscard]] MediumGrid with_fields(MediumGrid grid, const FieldPair& fields,
                                     Parametrization param);

// Horizontal slab [z_min, z_max) with uniform tissue values.
struct TissueValues
{
  double c0 = 0.0;          // m/s
  double rho = 0.0;         // kg/m^3
  double q = kInfiniteQ;    // quality factor at the reference frequency
};

struct PhantomLayer
{
  double z_min = 0.0;  // m
  double z_max = 0.0;  // m
  TissueValues tissue;
};

// Elliptical inclusion, fully contained in the domain.
struct PhantomEllipse
{
  double center_x = 0.0;  // m
  double center_z = 0.0;  // m
  double semi_x = 0.0;    // m
  double semi_z = 0.0;    // m
  TissueValues tissue;
};

// Synthetic layered medium: a background, optional horizontal slabs (later
// entries override earlier ones), and an optional elliptical inclusion that
// overrides everything inside it. `perturbation` adds seeded within-region
// variation: speed and density are scaled per node by independent uniform
// factors in [1 - perturbation, 1 + perturbation).
struct PhantomSpec
{
  int nx = 0;
  int nz = 0;
  double size_x = 0.0;  // m
  double size_z = 0.0;  // m
  TissueValues background;
  std::vector<PhantomLayer> layers;
  std::optional<PhantomEllipse> inclusion;
  double perturbation = 0.0;
  std::uint64_t seed = 0;
};

// Builds the gridded medium: per node, kappa0 = rho*c0^2 and the attenuation
// coefficients are calibrated so the quality factor at omega_ref matches the
// region's Q to 1e-6 relative. `fixed` supplies the coefficients that
// calibration holds constant for multi-coefficient model kinds. Throws
// ConstraintError for an invalid specification; calibration failures
// propagate as CalibrationError.
[[nodiscard]] MediumGrid build_phantom(const PhantomSpec& spec, AttenuationKind kind,
                                       const ComplexFrequency& omega_ref,
                                       const FixedCoefficients& fixed = {});

// Unnormalized l2 norm over nodes of (c_true - c_rec)/c_true. Throws
// ConstraintError for mismatched shapes or nonpositive reference values.
[[nodiscard]] double relative_model_error(const Eigen::ArrayXd& c_true,
                                          const Eigen::ArrayXd& c_rec);

}  // namespace viscotomo

#endif  // VISCOTOMO_MEDIUM_HPP
