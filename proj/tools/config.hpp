#pragma once

// Run configuration for the command line tool: a plain text file of
// "key = value" lines grouped in [sections], with # comments. Numbers may be
// decimals or rationals ("3/2"); parameter values may be sweeps "start:stop:count"
// or comma lists.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace radcli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where a value came from: "run.cfg:12" or "flag --alpha".
struct Origin {
  std::string where;
};

struct Entry {
  std::string value;
  Origin origin;
};

struct RawSection {
  std::string name;
  std::map<std::string, Entry> entries;
  Origin origin;
};

/// Sections in file order; keys before the first header land in section "".
struct RawConfig {
  std::vector<RawSection> sections;
  RawSection& section(const std::string& name);  // last one with that name, created if absent
  const RawSection* find(const std::string& name) const;
};

RawConfig parse_config_text(const std::string& text, const std::string& source);
RawConfig parse_config_file(const std::string& path);

/// Decimal or reduced rational; throws ConfigError naming `origin`.
double parse_number(const std::string& s, const Origin& origin);
/// "a:b:n" (n evenly spaced values), "x, y, z", or a single number.
std::vector<double> parse_values(const std::string& s, const Origin& origin);
/// Log-spaced "lo:hi" or "lo:hi:count".
std::vector<double> parse_log_range(const std::string& s, std::size_t default_count, const Origin& origin);

struct FamilyEntry {
  std::string kind = "gaussian";
  double scale = 1.0;
  double tail_exponent = 4.0;
  double transition = 0.0;
  double cutoff = 0.0;
};

struct GridSettings {
  double rmin = 1e-5;
  double rmax = 1e5;
  std::size_t n = 4096;
  double zbar_min = 1e-4;
  double zbar_max = 1e4;
  std::size_t zbar_n = 385;
};

struct ParamValues {
  std::vector<double> values;
  Origin origin;
};

struct RunConfig {
  std::string theorem;
  std::map<std::string, ParamValues> params;  // n p q r a alpha beta gamma sigma
  GridSettings grid;
  bool families_given = false;
  std::vector<FamilyEntry> families;
  std::string zprofile = "gaussian";
  double zscale = 1.0;
  std::vector<double> lambdas{0.5, 0.8, 1.25, 2.0};
  std::optional<std::string> out;
  std::optional<std::string> json;
  std::optional<double> tol;
  std::optional<int> threads;
};

RunConfig build_run_config(const RawConfig& raw);

/// One point of the parameter sweep; keys as in RunConfig::params.
using ParamPoint = std::map<std::string, double>;

/// Cartesian product of the sweeps in fixed key order, last key fastest.
/// For the interpolation theorems a given sigma must satisfy
/// gamma = a sigma + (1 - a) beta; a missing sigma is derived (0 when a = 0).
std::vector<ParamPoint> expand_params(const RunConfig& cfg, const std::vector<std::string>& keys);

/// Keys the theorem needs, in output order.
std::vector<std::string> param_keys(const std::string& theorem);

}  // namespace radcli
