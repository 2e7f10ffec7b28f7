// Copyright (c) 2026 the viscotomo developers.
// SPDX-License-Identifier: Apache-2.0

#include "viscotomo/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "viscotomo/errors.hpp"

namespace viscotomo
{

namespace
{

constexpr char kGridMagic[8] = {'V', 'A', 'G', 'R', 'I', 'D', '0', '1'};
constexpr std::string_view kDataHeader = "source_id,receiver_id,omega_r,omega_i,p_real,p_imag";

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
  throw ConfigError(path + ": " + what);
}

// Writes through a temporary sibling renamed into place on success, so a
// crash or error never leaves a partial file at the target path.
void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& writer)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      fail(tmp, "cannot open for writing");
    writer(out);
    out.flush();
    if (!out)
    {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      fail(tmp, "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
  {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    fail(path, "cannot replace file: " + ec.message());
  }
}

void put_u32(std::ostream& out, std::uint32_t v)
{
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

void put_f64(std::ostream& out, double v)
{
  const auto u = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i)
    bytes[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

std::uint32_t take_u32(std::istream& in, const std::string& path)
{
  char bytes[4];
  if (!in.read(bytes, 4))
    fail(path, "truncated grid file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  return v;
}

double take_f64(std::istream& in, const std::string& path)
{
  char bytes[8];
  if (!in.read(bytes, 8))
    fail(path, "truncated grid file");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i)
    u |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  return std::bit_cast<double>(u);
}

// 17 significant digits: enough for any IEEE double to parse back exactly.
std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, const std::string& context)
{
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0')
    throw ConfigError(context + ": not a number: '" + token + "'");
  return v;
}

long parse_long(const std::string& token, const std::string& context)
{
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0')
    throw ConfigError(context + ": not an integer: '" + token + "'");
  return v;
}

std::vector<std::string> split_csv_row(const std::string& line)
{
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true)
  {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos)
    {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string trim(std::string_view sv)
{
  const auto begin = sv.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos)
    return {};
  const auto end = sv.find_last_not_of(" \t\r");
  return std::string(sv.substr(begin, end - begin + 1));
}

}  // namespace

void write_grid(const std::string& path, const MediumGrid& grid)
{
  validate_medium(grid);
  const std::vector<std::string> coeff_names =
      coefficient_names(grid.atten_kind, grid.atten_coeffs.size());

  atomic_write(path, [&](std::ostream& out) {
    out.write(kGridMagic, sizeof kGridMagic);
    put_u32(out, static_cast<std::uint32_t>(grid.nx));
    put_u32(out, static_cast<std::uint32_t>(grid.nz));
    put_f64(out, grid.dx);
    put_f64(out, grid.dz);
    out.put(static_cast<char>(grid.atten_kind));
    put_u32(out, static_cast<std::uint32_t>(2 + coeff_names.size()));

    const auto put_name = [&out](std::string_view name) {
      put_u32(out, static_cast<std::uint32_t>(name.size()));
      out.write(name.data(), static_cast<std::streamsize>(name.size()));
    };
    put_name("kappa0");
    put_name("rho");
    for (const std::string& name : coeff_names)
      put_name(name);

    const auto put_field = [&out](const Eigen::ArrayXd& field) {
      for (Eigen::Index i = 0; i < field.size(); ++i)
        put_f64(out, field[i]);
    };
    put_field(grid.kappa0);
    put_field(grid.rho);
    for (const Eigen::ArrayXd& coeff : grid.atten_coeffs)
      put_field(coeff);
  });
}

MediumGrid read_grid(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(path, "cannot open grid file");

  char magic[8];
  if (!in.read(magic, 8) || !std::equal(magic, magic + 8, kGridMagic))
    fail(path, "not a VAGRID01 file");

  MediumGrid grid;
  const std::uint32_t nx = take_u32(in, path);
  const std::uint32_t nz = take_u32(in, path);
  if (nx < 3 || nz < 3 || nx > 100000 || nz > 100000)
    fail(path, "implausible grid dimensions");
  grid.nx = static_cast<int>(nx);
  grid.nz = static_cast<int>(nz);
  grid.dx = take_f64(in, path);
  grid.dz = take_f64(in, path);

  const int tag = in.get();
  if (tag == EOF)
    fail(path, "truncated grid file");
  if (tag < 0 || tag > static_cast<int>(AttenuationKind::kGeneralized))
    fail(path, "unknown attenuation model tag " + std::to_string(tag));
  grid.atten_kind = static_cast<AttenuationKind>(tag);

  const std::uint32_t field_count = take_u32(in, path);
  if (field_count < 2 || field_count > 1024)
    fail(path, "implausible field count");

  std::vector<std::string> names;
  names.reserve(field_count);
  for (std::uint32_t f = 0; f < field_count; ++f)
  {
    const std::uint32_t len = take_u32(in, path);
    if (len > 256)
      fail(path, "implausible field name length");
    std::string name(len, '\0');
    if (!in.read(name.data(), len))
      fail(path, "truncated grid file");
    names.push_back(std::move(name));
  }
  if (names[0] != "kappa0" || names[1] != "rho")
    fail(path, "expected leading fields kappa0, rho");
  std::vector<std::string> expected;
  try
  {
    expected = coefficient_names(grid.atten_kind, field_count - 2);
  }
  catch (const ConstraintError& err)
  {
    fail(path, err.what());
  }
  for (std::uint32_t f = 2; f < field_count; ++f)
    if (names[f] != expected[f - 2])
      fail(path, "unexpected coefficient field '" + names[f] + "'");

  const Eigen::Index n = grid.node_count();
  const auto take_field = [&]() {
    Eigen::ArrayXd field(n);
    for (Eigen::Index i = 0; i < n; ++i)
      field[i] = take_f64(in, path);
    return field;
  };
  grid.kappa0 = take_field();
  grid.rho = take_field();
  for (std::uint32_t f = 2; f < field_count; ++f)
    grid.atten_coeffs.push_back(take_field());

  if (in.peek() != EOF)
    fail(path, "trailing bytes after grid payload");

  try
  {
    validate_medium(grid);
  }
  catch (const ConstraintError& err)
  {
    fail(path, err.what());
  }
  return grid;
}

void write_data_csv(const std::string& path, const FrequencyData& data)
{
  atomic_write(path, [&](std::ostream& out) {
    out << kDataHeader << '\n';
    for (const FrequencyTrace& trace : data.traces)
    {
      for (std::size_t r = 0; r < trace.values.size(); ++r)
      {
        out << trace.source_id << ',' << r << ',' << format_double(trace.omega.omega_r) << ','
            << format_double(trace.omega.omega_i) << ','
            << format_double(trace.values[r].real()) << ','
            << format_double(trace.values[r].imag()) << '\n';
      }
    }
  });
}

FrequencyData read_data_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    fail(path, "cannot open data file");

  std::string line;
  if (!std::getline(in, line) || trim(line) != kDataHeader)
    fail(path, "missing data header");

  FrequencyData data;
  std::size_t lineno = 1;
  while (std::getline(in, line))
  {
    ++lineno;
    if (trim(line).empty())
      continue;
    const std::vector<std::string> fields = split_csv_row(trim(line));
    const std::string context = path + " line " + std::to_string(lineno);
    if (fields.size() != 6)
      fail(context, "expected 6 columns");

    const int source_id = static_cast<int>(parse_long(fields[0], context));
    const long receiver_id = parse_long(fields[1], context);
    const ComplexFrequency omega{parse_double(fields[2], context),
                                 parse_double(fields[3], context)};
    const Complex value{parse_double(fields[4], context), parse_double(fields[5], context)};

    const bool fresh = data.traces.empty() || data.traces.back().source_id != source_id ||
                       data.traces.back().omega.omega_r != omega.omega_r ||
                       data.traces.back().omega.omega_i != omega.omega_i;
    if (fresh)
    {
      FrequencyTrace trace;
      trace.source_id = source_id;
      trace.omega = omega;
      data.traces.push_back(std::move(trace));
    }
    FrequencyTrace& trace = data.traces.back();
    if (receiver_id != static_cast<long>(trace.values.size()))
      fail(context, "receiver ids must count consecutively from 0 per trace");
    trace.values.push_back(value);
  }

  for (const FrequencyTrace& trace : data.traces)
    if (trace.values.size() != data.traces.front().values.size())
      fail(path, "traces carry differing receiver counts");
  return data;
}

void write_dispersion_csv(const std::string& path, const std::vector<NamedDispersion>& tables)
{
  atomic_write(path, [&](std::ostream& out) {
    out << "model,freq_hz,Q\n";
    for (const NamedDispersion& table : tables)
      for (const DispersionRow& row : table.rows)
        out << table.model << ',' << format_double(row.freq_hz) << ',' << format_double(row.q)
            << '\n';
  });
}

void write_history_csv(const std::string& path, const InversionHistory& history)
{
  atomic_write(path, [&](std::ostream& out) {
    out << "iteration,omega_r,omega_i,misfit,step,grad_norm,accepted\n";
    for (const IterationRecord& record : history.records)
      out << record.iteration << ',' << format_double(record.omega.omega_r) << ','
          << format_double(record.omega.omega_i) << ',' << format_double(record.misfit) << ','
          << format_double(record.step) << ',' << format_double(record.grad_norm) << ','
          << (record.accepted ? 1 : 0) << '\n';
  });
}

RunConfig RunConfig::parse_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    fail(path, "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  try
  {
    return parse_string(text.str());
  }
  catch (const ConfigError& err)
  {
    fail(path, err.what());
  }
}

RunConfig RunConfig::parse_string(const std::string& text)
{
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw))
  {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos)
      raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty())
      continue;

    if (line.front() == '[')
    {
      if (line.back() != ']' || line.size() < 3)
        throw ConfigError("line " + std::to_string(lineno) + ": malformed [section] header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      config.sections_.try_emplace(section);
      continue;
    }

    const auto equals = line.find('=');
    if (equals == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, equals));
    const std::string value = trim(std::string_view(line).substr(equals + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                        "' appears outside any [section]");
    config.sections_[section].emplace_back(key, value);
  }
  return config;
}

const std::string* RunConfig::find(std::string_view section, std::string_view key) const
{
  const auto it = sections_.find(section);
  if (it == sections_.end())
    return nullptr;
  for (const auto& [k, v] : it->second)
    if (k == key)
      return &v;
  return nullptr;
}

bool RunConfig::has(std::string_view section, std::string_view key) const
{
  return find(section, key) != nullptr;
}

std::string RunConfig::get_string(std::string_view section, std::string_view key) const
{
  const std::string* value = find(section, key);
  if (value == nullptr)
    throw ConfigError("missing key '" + std::string(key) + "' in section [" +
                      std::string(section) + "]");
  return *value;
}

std::string RunConfig::get_string(std::string_view section, std::string_view key,
                                  std::string_view fallback) const
{
  const std::string* value = find(section, key);
  return value != nullptr ? *value : std::string(fallback);
}

double RunConfig::get_double(std::string_view section, std::string_view key) const
{
  return parse_double(get_string(section, key),
                      "[" + std::string(section) + "] " + std::string(key));
}

double RunConfig::get_double(std::string_view section, std::string_view key,
                             double fallback) const
{
  return has(section, key) ? get_double(section, key) : fallback;
}

int RunConfig::get_int(std::string_view section, std::string_view key) const
{
  return static_cast<int>(
      parse_long(get_string(section, key), "[" + std::string(section) + "] " + std::string(key)));
}

int RunConfig::get_int(std::string_view section, std::string_view key, int fallback) const
{
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<std::string> RunConfig::get_all(std::string_view section, std::string_view key) const
{
  std::vector<std::string> values;
  const auto it = sections_.find(section);
  if (it == sections_.end())
    return values;
  for (const auto& [k, v] : it->second)
    if (k == key)
      values.push_back(v);
  return values;
}

std::vector<double> RunConfig::get_double_list(std::string_view section,
                                               std::string_view key) const
{
  const std::string joined = get_string(section, key);
  const std::string context = "[" + std::string(section) + "] " + std::string(key);
  std::vector<double> values;
  std::string token;
  for (const char c : joined + " ")
  {
    if (c == ',' || c == ' ' || c == '\t')
    {
      if (!token.empty())
        values.push_back(parse_double(token, context));
      token.clear();
    }
    else
    {
      token.push_back(c);
    }
  }
  return values;
}

}  // namespace viscotomo
