// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef VISCOTOMO_IO_HPP
#define VISCOTOMO_IO_HPP

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "viscotomo/attenuation.hpp"
#include "viscotomo/data.hpp"
#include "viscotomo/inversion.hpp"
#include "viscotomo/medium.hpp"

namespace viscotomo
{

//
// On-disk formats. All writers are atomic: output goes to a sibling temporary
// file that is renamed into place, so readers never observe partial files.
// All format violations raise ConfigError naming the offending file.
//

// Binary grid file ("VAGRID01"):
//   magic "VAGRID01" (8 bytes)
//   u32 nx, u32 nz                     little-endian node counts
//   f64 dx, f64 dz                     little-endian IEEE spacings, m
//   u8  model tag                      AttenuationKind value
//   u32 field count
//   per field: u32 name length, ASCII name bytes
//   per field: nx*nz f64 node values, row-major with z fastest
// The fields are "kappa0", "rho", then the model's coefficient names.
void write_grid(const std::string& path, const MediumGrid& grid);

// Reads and validates a grid file (structure, names, and the medium's
// physical invariants).
[[nodiscard]] MediumGrid read_grid(const std::string& path);

// Trace table: header `source_id,receiver_id,omega_r,omega_i,p_real,p_imag`,
// one row per stored value, numbers printed with 17 significant digits so
// every double round-trips exactly.
void write_data_csv(const std::string& path, const FrequencyData& data);
[[nodiscard]] FrequencyData read_data_csv(const std::string& path);

// One model's dispersion curve, tagged with its display name.
struct NamedDispersion
{
  std::string model;
  std::vector<DispersionRow> rows;
};

// Table with header `model,freq_hz,Q`, one row per (model, frequency).
void write_dispersion_csv(const std::string& path, const std::vector<NamedDispersion>& tables);

// Inversion log: header `iteration,omega_r,omega_i,misfit,step,grad_norm,accepted`,
// one row per record with `accepted` printed as 0/1.
void write_history_csv(const std::string& path, const InversionHistory& history);

// Line-oriented `[section]` / `key = value` configuration. `#` starts a
// comment anywhere in a line; keys may repeat within a section to form lists
// (scalar getters read the first occurrence, get_all returns every one in
// order). Lookup and conversion failures raise ConfigError naming the
// section and key.
class RunConfig
{
 public:
  [[nodiscard]] static RunConfig parse_file(const std::string& path);
  [[nodiscard]] static RunConfig parse_string(const std::string& text);

  [[nodiscard]] bool has(std::string_view section, std::string_view key) const;

  [[nodiscard]] std::string get_string(std::string_view section, std::string_view key) const;
  [[nodiscard]] std::string get_string(std::string_view section, std::string_view key,
                                       std::string_view fallback) const;
  [[nodiscard]] double get_double(std::string_view section, std::string_view key) const;
  [[nodiscard]] double get_double(std::string_view section, std::string_view key,
                                  double fallback) const;
  [[nodiscard]] int get_int(std::string_view section, std::string_view key) const;
  [[nodiscard]] int get_int(std::string_view section, std::string_view key, int fallback) const;

  // Every value bound to the key, in file order; empty if the key is absent.
  [[nodiscard]] std::vector<std::string> get_all(std::string_view section,
                                                 std::string_view key) const;
  // Comma- and/or whitespace-separated numbers.
  [[nodiscard]] std::vector<double> get_double_list(std::string_view section,
                                                    std::string_view key) const;

 private:
  const std::string* find(std::string_view section, std::string_view key) const;

  // Section name -> ordered (key, value) pairs.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>, std::less<>> sections_;
};

}  // namespace viscotomo

#endif  // VISCOTOMO_IO_HPP
