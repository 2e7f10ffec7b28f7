// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0
//
// Batch command-line surface for the frequency-domain visco-acoustic
// toolkit: phantom construction, forward data synthesis, noise injection,
// inversion, dispersion tables, and reconstruction scoring. Every command is
// driven by a `[section]` / `key = value` configuration file; re-running a
// command with the same configuration (and seed) produces byte-identical
// artifacts.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "viscotomo/attenuation.hpp"
#include "viscotomo/data.hpp"
#include "viscotomo/errors.hpp"
#include "viscotomo/inversion.hpp"
#include "viscotomo/io.hpp"
#include "viscotomo/medium.hpp"
#include "viscotomo/signal.hpp"
#include "viscotomo/solver.hpp"

namespace
{

using namespace viscotomo;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Compact human-readable number for console summaries.
std::string compact(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string full_precision(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Whitespace/comma separated doubles; the empty string parses to an empty
// list. "inf" is accepted (used for lossless quality factors).
std::vector<double> parse_numbers(const std::string& text, const std::string& context)
{
  std::vector<double> values;
  const char* cursor = text.c_str();
  while (*cursor != '\0')
  {
    while (*cursor == ' ' || *cursor == '\t' || *cursor == ',')
      ++cursor;
    if (*cursor == '\0')
      break;
    char* end = nullptr;
    const double value = std::strtod(cursor, &end);
    if (end == cursor)
      throw ConfigError(context + ": cannot parse number near '" + cursor + "'");
    values.push_back(value);
    cursor = end;
  }
  return values;
}

std::vector<double> numbers_of(const RunConfig& cfg, const std::string& section,
                               const std::string& key)
{
  return parse_numbers(cfg.get_string(section, key), "[" + section + "] " + key);
}

std::vector<double> numbers_of(const RunConfig& cfg, const std::string& section,
                               const std::string& key, const std::string& fallback)
{
  return parse_numbers(std::string(cfg.get_string(section, key, fallback)),
                       "[" + section + "] " + key);
}

AttenuationKind kind_of_config(const RunConfig& cfg, const std::string& section)
{
  const std::string name = cfg.get_string(section, "attenuation", "none");
  const std::optional<AttenuationKind> kind = kind_from_name(name);
  if (!kind)
    throw ConfigError("[" + section + "] attenuation: unknown model '" + name +
                      "' (use none, kolsky-futterman, cole-cole, zener, kelvin-voigt, "
                      "maxwell, ksb, szabo, or generalized)");
  return *kind;
}

FixedCoefficients fixed_of_config(const RunConfig& cfg, const std::string& section)
{
  FixedCoefficients fixed;
  if (cfg.has(section, "tau_sig"))
    fixed.tau_sig = cfg.get_double(section, "tau_sig");
  if (cfg.has(section, "beta"))
    fixed.beta = cfg.get_double(section, "beta");
  if (cfg.has(section, "tau"))
    fixed.tau = cfg.get_double(section, "tau");
  if (cfg.has(section, "mechanisms"))
  {
    const std::vector<double> flat = numbers_of(cfg, section, "mechanisms");
    if (flat.empty() || flat.size() % 2 != 0)
      throw ConfigError("[" + section + "] mechanisms: expected omega_l b_l pairs");
    for (std::size_t k = 0; k < flat.size(); k += 2)
      fixed.mechanisms.push_back(RelaxationMechanism{flat[k], flat[k + 1]});
  }
  return fixed;
}

TissueValues tissue_of(const std::vector<double>& values, const std::string& context)
{
  if (values.size() != 3)
    throw ConfigError(context + ": expected 'c0 rho Q'");
  return TissueValues{values[0], values[1], values[2]};
}

// The [medium] section as a phantom recipe. `background = c0 rho Q`,
// repeatable `layer = z_min z_max c0 rho Q`, optional
// `inclusion = cx cz sx sz c0 rho Q`.
PhantomSpec phantom_of_config(const RunConfig& cfg)
{
  PhantomSpec spec;
  spec.nx = cfg.get_int("medium", "nx");
  spec.nz = cfg.get_int("medium", "nz");
  spec.size_x = cfg.get_double("medium", "size_x");
  spec.size_z = cfg.get_double("medium", "size_z");
  spec.background = tissue_of(numbers_of(cfg, "medium", "background"), "[medium] background");
  for (const std::string& line : cfg.get_all("medium", "layer"))
  {
    const std::vector<double> v = parse_numbers(line, "[medium] layer");
    if (v.size() != 5)
      throw ConfigError("[medium] layer: expected 'z_min z_max c0 rho Q'");
    spec.layers.push_back(PhantomLayer{v[0], v[1], TissueValues{v[2], v[3], v[4]}});
  }
  if (cfg.has("medium", "inclusion"))
  {
    const std::vector<double> v = numbers_of(cfg, "medium", "inclusion");
    if (v.size() != 7)
      throw ConfigError("[medium] inclusion: expected 'cx cz sx sz c0 rho Q'");
    spec.inclusion =
        PhantomEllipse{v[0], v[1], v[2], v[3], TissueValues{v[4], v[5], v[6]}};
  }
  spec.perturbation = cfg.get_double("medium", "perturbation", 0.0);
  spec.seed = static_cast<std::uint64_t>(cfg.get_double("medium", "seed", 0.0));
  return spec;
}

MediumGrid build_phantom_of_config(const RunConfig& cfg)
{
  const ComplexFrequency omega_ref =
      frequency_from_hertz(cfg.get_double("medium", "omega_ref_hz", 300.0e3));
  return build_phantom(phantom_of_config(cfg), kind_of_config(cfg, "medium"), omega_ref,
                       fixed_of_config(cfg, "medium"));
}

// A medium either loaded from `[medium] grid = <file>` or built inline.
MediumGrid medium_of_config(const RunConfig& cfg)
{
  if (cfg.has("medium", "grid"))
    return read_grid(cfg.get_string("medium", "grid"));
  return build_phantom_of_config(cfg);
}

// Sources and receivers: repeatable `source = x z [x z ...]` (one line may
// list several excitation points acting as one source) and
// `receiver = x z`, plus ring generators
// `source_ring = count cx cz radius [angle_offset]` and
// `receiver_ring = count cx cz radius [angle_offset]`. Source ids are
// assigned in order of appearance: all `source` lines first, then rings.
Acquisition acquisition_of_config(const RunConfig& cfg)
{
  Acquisition acq;
  int next_id = 0;
  for (const std::string& line : cfg.get_all("acquisition", "source"))
  {
    const std::vector<double> v = parse_numbers(line, "[acquisition] source");
    if (v.empty() || v.size() % 2 != 0)
      throw ConfigError("[acquisition] source: expected one or more 'x z' pairs");
    SourceSpec source;
    source.id = next_id++;
    for (std::size_t k = 0; k < v.size(); k += 2)
      source.points.push_back(Position{v[k], v[k + 1]});
    acq.sources.push_back(std::move(source));
  }
  for (const std::string& line : cfg.get_all("acquisition", "source_ring"))
  {
    const std::vector<double> v = parse_numbers(line, "[acquisition] source_ring");
    if (v.size() != 4 && v.size() != 5)
      throw ConfigError("[acquisition] source_ring: expected 'count cx cz radius [offset]'");
    const int count = static_cast<int>(v[0]);
    if (count < 1 || v[0] != count)
      throw ConfigError("[acquisition] source_ring: count must be a positive integer");
    const double offset = v.size() == 5 ? v[4] : 0.0;
    for (int k = 0; k < count; ++k)
    {
      const double angle = kTwoPi * k / count + offset;
      acq.sources.push_back(SourceSpec{
          next_id++,
          {Position{v[1] + v[3] * std::cos(angle), v[2] + v[3] * std::sin(angle)}}});
    }
  }
  for (const std::string& line : cfg.get_all("acquisition", "receiver"))
  {
    const std::vector<double> v = parse_numbers(line, "[acquisition] receiver");
    if (v.size() != 2)
      throw ConfigError("[acquisition] receiver: expected 'x z'");
    acq.receivers.push_back(Position{v[0], v[1]});
  }
  for (const std::string& line : cfg.get_all("acquisition", "receiver_ring"))
  {
    const std::vector<double> v = parse_numbers(line, "[acquisition] receiver_ring");
    if (v.size() != 4 && v.size() != 5)
      throw ConfigError("[acquisition] receiver_ring: expected 'count cx cz radius [offset]'");
    const int count = static_cast<int>(v[0]);
    if (count < 1 || v[0] != count)
      throw ConfigError("[acquisition] receiver_ring: count must be a positive integer");
    const double offset = v.size() == 5 ? v[4] : 0.0;
    for (int k = 0; k < count; ++k)
    {
      const double angle = kTwoPi * k / count + offset;
      acq.receivers.push_back(
          Position{v[1] + v[3] * std::cos(angle), v[2] + v[3] * std::sin(angle)});
    }
  }
  return acq;
}

Complex amplitude_of_config(const RunConfig& cfg)
{
  const std::vector<double> v = numbers_of(cfg, "acquisition", "amplitude", "1 0");
  if (v.size() == 1)
    return Complex{v[0], 0.0};
  if (v.size() != 2)
    throw ConfigError("[acquisition] amplitude: expected 're [im]'");
  return Complex{v[0], v[1]};
}

BoundaryCondition boundary_of(const std::string& name, const std::string& context)
{
  if (name == "absorbing")
    return BoundaryCondition::kAbsorbing;
  if (name == "wall")
    return BoundaryCondition::kWall;
  throw ConfigError(context + ": expected 'absorbing' or 'wall', got '" + name + "'");
}

BoundarySpec boundaries_of_config(const RunConfig& cfg)
{
  const std::string all = cfg.get_string("boundaries", "all", "absorbing");
  BoundarySpec bcs;
  bcs.left = bcs.right = bcs.top = bcs.bottom = boundary_of(all, "[boundaries] all");
  for (const char* side : {"left", "right", "top", "bottom"})
    if (cfg.has("boundaries", side))
    {
      const BoundaryCondition value =
          boundary_of(cfg.get_string("boundaries", side), std::string("[boundaries] ") + side);
      if (std::string(side) == "left")
        bcs.left = value;
      else if (std::string(side) == "right")
        bcs.right = value;
      else if (std::string(side) == "top")
        bcs.top = value;
      else
        bcs.bottom = value;
    }
  return bcs;
}

// Frequency sweep: `freq_hz` (ordinary frequencies, ascending) and optional
// `omega_i` damping values (descending, default single 0). The returned
// lists feed frequency_schedule.
std::pair<std::vector<double>, std::vector<double>> sweep_of_config(const RunConfig& cfg)
{
  std::vector<double> omega_r = numbers_of(cfg, "frequencies", "freq_hz");
  if (omega_r.empty())
    throw ConfigError("[frequencies] freq_hz: at least one frequency is required");
  for (double& f : omega_r)
    f *= kTwoPi;
  const std::vector<double> omega_i = numbers_of(cfg, "frequencies", "omega_i", "0");
  if (omega_i.empty())
    throw ConfigError("[frequencies] omega_i: at least one damping value is required");
  return {omega_r, omega_i};
}

std::string output_path(const RunConfig& cfg, const std::string& key,
                        const std::string& fallback, const std::string& override_path)
{
  if (!override_path.empty())
    return override_path;
  return cfg.get_string("output", key, fallback);
}

void describe_region(const char* label, const TissueValues& tissue)
{
  std::cout << label << ": c0=" << compact(tissue.c0) << " rho=" << compact(tissue.rho)
            << " Q=" << compact(tissue.q) << "\n";
}

int cmd_phantom(const RunConfig& cfg, const std::string& out_override)
{
  const PhantomSpec spec = phantom_of_config(cfg);
  const MediumGrid grid = build_phantom_of_config(cfg);
  const std::string path = output_path(cfg, "grid", "phantom.grid", out_override);
  write_grid(path, grid);

  std::cout << "phantom: " << grid.nx << "x" << grid.nz << " nodes, "
            << compact(grid.size_x()) << " x " << compact(grid.size_z()) << " m, model "
            << kind_name(grid.atten_kind) << "\n";
  describe_region("background", spec.background);
  for (std::size_t k = 0; k < spec.layers.size(); ++k)
    describe_region(("layer " + std::to_string(k)).c_str(), spec.layers[k].tissue);
  if (spec.inclusion)
    describe_region("inclusion", spec.inclusion->tissue);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_forward(const RunConfig& cfg, const std::string& out_override)
{
  const MediumGrid medium = medium_of_config(cfg);
  const Acquisition acq = acquisition_of_config(cfg);
  const BoundarySpec bcs = boundaries_of_config(cfg);
  const Complex amplitude = amplitude_of_config(cfg);
  const auto [omega_r, omega_i] = sweep_of_config(cfg);
  const std::vector<ComplexFrequency> schedule = frequency_schedule(omega_r, omega_i);

  FrequencyData data;
  for (const ComplexFrequency& omega : schedule)
  {
    const FrequencyData block = forward_map(medium, omega, acq, bcs, amplitude).data;
    data.traces.insert(data.traces.end(), block.traces.begin(), block.traces.end());
  }

  const std::string path = output_path(cfg, "data", "data.csv", out_override);
  write_data_csv(path, data);
  std::cout << "wrote " << path << ": " << data.value_count() << " rows ("
            << acq.sources.size() << " sources x " << acq.receivers.size()
            << " receivers x " << schedule.size() << " frequencies)\n";
  return 0;
}

int cmd_noise(const RunConfig& cfg, const std::string& out_override,
              const std::optional<double>& snr_flag,
              const std::optional<std::uint64_t>& seed_flag)
{
  const FrequencyData data = read_data_csv(cfg.get_string("noise", "data"));
  const double snr_db = snr_flag ? *snr_flag : cfg.get_double("noise", "snr_db");
  const std::uint64_t seed =
      seed_flag ? *seed_flag
                : static_cast<std::uint64_t>(cfg.get_double("noise", "seed", 0.0));
  const FrequencyData noisy = add_white_noise(data, snr_db, seed);
  const std::string path = output_path(cfg, "noisy", "noisy.csv", out_override);
  write_data_csv(path, noisy);
  std::cout << "wrote " << path << ": snr_db=" << compact(snr_db) << " seed=" << seed << "\n";
  return 0;
}

InversionConfig inversion_of_config(const RunConfig& cfg,
                                    const std::pair<std::vector<double>, std::vector<double>>& sweep)
{
  InversionConfig inv;
  inv.omega_r_list = sweep.first;
  inv.omega_i_list = sweep.second;
  inv.iters_per_frequency = cfg.get_int("inversion", "iters_per_frequency", 30);
  const std::string param_name = cfg.get_string("inversion", "parametrization", "speed_rho");
  const std::optional<Parametrization> param = parametrization_from_name(param_name);
  if (!param)
    throw ConfigError("[inversion] parametrization: unknown name '" + param_name +
                      "' (use kappa_rho, impedance_rho, speed_rho, or impedance_speed)");
  inv.parametrization = *param;
  inv.invert_first = cfg.get_int("inversion", "invert_first", 1) != 0;
  inv.invert_second = cfg.get_int("inversion", "invert_second", 0) != 0;
  inv.line_search.initial_step = cfg.get_double("inversion", "initial_step", 0.05);
  inv.line_search.backtrack_factor = cfg.get_double("inversion", "backtrack_factor", 0.5);
  inv.line_search.sufficient_decrease =
      cfg.get_double("inversion", "sufficient_decrease", 1.0e-4);
  inv.line_search.max_backtracks = cfg.get_int("inversion", "max_backtracks", 20);
  inv.first_bounds.lower = cfg.get_double("inversion", "first_lower", 0.0);
  inv.first_bounds.upper = cfg.get_double("inversion", "first_upper",
                                          std::numeric_limits<double>::infinity());
  inv.second_bounds.lower = cfg.get_double("inversion", "second_lower", 0.0);
  inv.second_bounds.upper = cfg.get_double("inversion", "second_upper",
                                           std::numeric_limits<double>::infinity());
  return inv;
}

// Scoring metric shared by `invert --truth` and the `error` command: the
// relative model error of the wave-speed field.
double speed_error(const MediumGrid& truth, const MediumGrid& reconstruction)
{
  return relative_model_error(fields_of(truth, Parametrization::kSpeedRho).first,
                              fields_of(reconstruction, Parametrization::kSpeedRho).first);
}

int cmd_invert(const RunConfig& cfg, const std::string& out_override,
               const std::string& truth_path)
{
  const FrequencyData observed = read_data_csv(cfg.get_string("inversion", "data"));
  const MediumGrid initial = cfg.has("inversion", "initial")
                                 ? read_grid(cfg.get_string("inversion", "initial"))
                                 : medium_of_config(cfg);
  const Acquisition acq = acquisition_of_config(cfg);
  const BoundarySpec bcs = boundaries_of_config(cfg);
  const Complex amplitude = amplitude_of_config(cfg);
  const InversionConfig inversion = inversion_of_config(cfg, sweep_of_config(cfg));

  const InversionResult result = invert(inversion, observed, initial, acq, bcs, amplitude);

  const std::string grid_path =
      output_path(cfg, "reconstruction", "reconstruction.grid", out_override);
  write_grid(grid_path, result.model);
  const std::string history_path = output_path(cfg, "history", "history.csv", "");
  write_history_csv(history_path, result.history);

  // Per-block accounting; a block that stopped before its iteration budget is
  // reported as a diagnostic but is not an error.
  std::size_t row = 0;
  while (row < result.history.records.size())
  {
    const IterationRecord opening = result.history.records[row];
    ++row;
    int iterations = 0;
    double final_misfit = opening.misfit;
    while (row < result.history.records.size() &&
           result.history.records[row].iteration != 0)
    {
      iterations = result.history.records[row].iteration;
      final_misfit = result.history.records[row].misfit;
      ++row;
    }
    std::cout << "block (omega_r=" << compact(opening.omega.omega_r)
              << ", omega_i=" << compact(opening.omega.omega_i) << "): misfit "
              << compact(opening.misfit) << " -> " << compact(final_misfit) << " in "
              << iterations << " iterations";
    if (iterations < inversion.iters_per_frequency)
      std::cout << " (ended early: no further line-search progress)";
    std::cout << "\n";
  }

  std::cout << "wrote " << grid_path << " and " << history_path << "\n";
  if (!truth_path.empty())
  {
    const MediumGrid truth = read_grid(truth_path);
    std::cout << "relative_model_error = " << full_precision(speed_error(truth, result.model))
              << "\n";
  }
  return 0;
}

int cmd_dispersion(const RunConfig& cfg, const std::string& out_override)
{
  // Default calibration coefficient set: every law hits the same quality
  // factor at the reference frequency, with the multi-coefficient laws using
  // the standard fixed values.
  const double kappa0 = cfg.get_double("dispersion", "kappa0", 2.25e9);
  const double rho = cfg.get_double("dispersion", "rho", 1000.0);
  const double target_q = cfg.get_double("dispersion", "q", 118.0);
  const ComplexFrequency omega_ref =
      frequency_from_hertz(cfg.get_double("dispersion", "omega_ref_hz", 300.0e3));

  const double f_min = cfg.get_double("dispersion", "freq_min_hz", 50.0e3);
  const double f_max = cfg.get_double("dispersion", "freq_max_hz", 800.0e3);
  const int count = cfg.get_int("dispersion", "count", 76);
  if (!(f_min > 0.0) || !(f_max > f_min) || count < 2)
    throw ConfigError("[dispersion] sweep: need 0 < freq_min_hz < freq_max_hz and count >= 2");
  std::vector<double> freqs(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    freqs[static_cast<std::size_t>(k)] = f_min + (f_max - f_min) * k / (count - 1);

  std::vector<std::string> names;
  if (cfg.has("dispersion", "models"))
  {
    std::istringstream stream(cfg.get_string("dispersion", "models"));
    std::string token;
    while (stream >> token)
      names.push_back(token);
  }
  else
  {
    names = {"kolsky-futterman", "cole-cole", "zener", "kelvin-voigt",
             "maxwell",          "ksb",       "szabo"};
  }

  std::vector<NamedDispersion> tables;
  for (const std::string& name : names)
  {
    const std::optional<AttenuationKind> kind = kind_from_name(name);
    if (!kind || *kind == AttenuationKind::kNone)
      throw ConfigError("[dispersion] models: '" + name + "' is not an attenuating model");
    FixedCoefficients fixed;
    switch (*kind)
    {
      case AttenuationKind::kColeCole:
        fixed.tau_sig = 85.5e-9;
        fixed.beta = 0.8;
        break;
      case AttenuationKind::kZener:
        fixed.tau_sig = 85.4e-9;
        break;
      case AttenuationKind::kKsb:
        fixed.tau = 2.0e5;
        fixed.beta = 0.5;
        break;
      case AttenuationKind::kSzabo:
        fixed.beta = 0.6;
        break;
      case AttenuationKind::kGeneralized:
        fixed.mechanisms = {{2.0e5, 0.3}, {2.0e6, 0.3}};
        break;
      default:
        break;
    }
    const AttenuationSpec spec = calibrate_to_quality(*kind, kappa0, target_q, omega_ref,
                                                      fixed);
    tables.push_back(NamedDispersion{name, dispersion_table(spec, kappa0, rho, freqs)});
  }

  const std::string path = output_path(cfg, "dispersion", "dispersion.csv", out_override);
  write_dispersion_csv(path, tables);
  std::cout << "wrote " << path << ": " << names.size() << " models x " << count
            << " frequencies\n";
  return 0;
}

int cmd_error(const RunConfig& cfg, const std::string& truth_override)
{
  const std::string truth_path =
      truth_override.empty() ? cfg.get_string("error", "truth") : truth_override;
  const MediumGrid truth = read_grid(truth_path);
  const MediumGrid reconstruction = read_grid(cfg.get_string("error", "reconstruction"));
  std::cout << "relative_model_error = " << full_precision(speed_error(truth, reconstruction))
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"frequency-domain visco-acoustic modeling and inversion"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string truth_path;
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_path, "override the command's primary output path");
  };

  CLI::App* phantom = app.add_subcommand("phantom", "build a synthetic medium grid");
  add_common(phantom);
  CLI::App* forward = app.add_subcommand("forward", "synthesize frequency-domain data");
  add_common(forward);
  CLI::App* noise = app.add_subcommand("noise", "add seeded white noise to a data file");
  add_common(noise);
  noise->add_option("--snr-db", snr_db, "target signal-to-noise ratio in dB");
  noise->add_option("--seed", seed, "noise generator seed");
  CLI::App* invert_cmd = app.add_subcommand("invert", "reconstruct a medium from data");
  add_common(invert_cmd);
  invert_cmd->add_option("--truth", truth_path, "truth grid for the final error metric");
  CLI::App* dispersion = app.add_subcommand("dispersion", "tabulate quality-factor curves");
  add_common(dispersion);
  CLI::App* error_cmd = app.add_subcommand("error", "score a reconstruction against truth");
  add_common(error_cmd);
  error_cmd->add_option("--truth", truth_path, "truth grid (overrides [error] truth)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are configuration errors
  }

  try
  {
    const RunConfig cfg = RunConfig::parse_file(config_path);
    if (phantom->parsed())
      return cmd_phantom(cfg, out_path);
    if (forward->parsed())
      return cmd_forward(cfg, out_path);
    if (noise->parsed())
      return cmd_noise(cfg, out_path, snr_db, seed);
    if (invert_cmd->parsed())
      return cmd_invert(cfg, out_path, truth_path);
    if (dispersion->parsed())
      return cmd_dispersion(cfg, out_path);
    if (error_cmd->parsed())
      return cmd_error(cfg, truth_path);
    std::cerr << "error: no command selected\n";
    return 2;
  }
  catch (const ConstraintError& e)
  {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  catch (const ConfigError& e)
  {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  catch (const CalibrationError& e)
  {
    std::cerr << "calibration error: " << e.what() << "\n";
    return 3;
  }
  catch (const SolverError& e)
  {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  }
  catch (const ValidityError& e)
  {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
