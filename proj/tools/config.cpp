#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace radcli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void error(const Origin& o, const std::string& msg) { throw ConfigError(o.where + ": " + msg); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

bool parse_integer(const std::string& s, long long& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

std::size_t parse_count(const std::string& s, const Origin& o) {
  long long v = 0;
  if (!parse_integer(trim(s), v) || v < 1) error(o, "expected a positive integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

const std::set<std::string> kTop{"theorem", "families", "zprofile", "zscale", "lambdas", "out", "json", "tol", "threads"};
const std::set<std::string> kParams{"n", "p", "q", "r", "a", "alpha", "beta", "gamma", "sigma"};
const std::set<std::string> kGrid{"rmin", "rmax", "n", "zbar_min", "zbar_max", "zbar_n"};
const std::set<std::string> kFamily{"kind", "scale", "tail_exponent", "transition", "cutoff"};

void check_keys(const RawSection& s, const std::set<std::string>& allowed) {
  for (const auto& [k, e] : s.entries) {
    if (!allowed.count(k)) {
      error(e.origin, "unknown key '" + k + "'" + (s.name.empty() ? "" : " in [" + s.name + "]"));
    }
  }
}

FamilyEntry family_from_name(const std::string& name, const Origin& o) {
  FamilyEntry f;
  if (name != "gaussian" && name != "bump" && name != "power_tail" && name != "power-tail") {
    error(o, "unknown family '" + name + "'");
  }
  f.kind = name == "power-tail" ? "power_tail" : name;
  return f;
}

}  // namespace

RawSection& RawConfig::section(const std::string& name) {
  for (auto it = sections.rbegin(); it != sections.rend(); ++it) {
    if (it->name == name) return *it;
  }
  sections.push_back({name, {}, {}});
  return sections.back();
}

const RawSection* RawConfig::find(const std::string& name) const {
  for (auto it = sections.rbegin(); it != sections.rend(); ++it) {
    if (it->name == name) return &*it;
  }
  return nullptr;
}

RawConfig parse_config_text(const std::string& text, const std::string& source) {
  RawConfig cfg;
  cfg.sections.push_back({"", {}, {source}});
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const Origin o{source + ":" + std::to_string(lineno)};
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') error(o, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) error(o, "empty section name");
      // [family] may repeat, every other section is opened once
      if (name != "family" && cfg.find(name) != nullptr) error(o, "duplicate section [" + name + "]");
      cfg.sections.push_back({name, {}, o});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) error(o, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) error(o, "missing key before '='");
    auto& sec = cfg.sections.back();
    if (sec.entries.count(key)) error(o, "duplicate key '" + key + "'");
    sec.entries[key] = {trim(line.substr(eq + 1)), o};
  }
  return cfg;
}

RawConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

double parse_number(const std::string& raw, const Origin& o) {
  const std::string s = trim(raw);
  if (s.empty()) error(o, "expected a number");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    long long num = 0, den = 0;
    if (!parse_integer(trim(s.substr(0, slash)), num) || !parse_integer(trim(s.substr(slash + 1)), den)) {
      error(o, "malformed rational '" + s + "'");
    }
    if (den == 0) error(o, "zero denominator in '" + s + "'");
    const long long g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  }
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v)) error(o, "malformed number '" + s + "'");
  return v;
}

std::vector<double> parse_values(const std::string& raw, const Origin& o) {
  const std::string s = trim(raw);
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) error(o, "sweep must read start:stop:count, got '" + s + "'");
    const double a = parse_number(parts[0], o), b = parse_number(parts[1], o);
    const std::size_t n = parse_count(parts[2], o);
    if (n == 1 && a != b) error(o, "a one-point sweep needs start == stop");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
    if (n > 1) out.back() = b;
    return out;
  }
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_number(part, o));
  if (out.empty()) error(o, "expected a value");
  return out;
}

std::vector<double> parse_log_range(const std::string& raw, std::size_t default_count, const Origin& o) {
  const auto parts = split(trim(raw), ':');
  if (parts.size() != 2 && parts.size() != 3) error(o, "range must read lo:hi or lo:hi:count");
  const double lo = parse_number(parts[0], o), hi = parse_number(parts[1], o);
  if (!(lo > 0.0) || !(hi >= lo)) error(o, "range needs 0 < lo <= hi");
  const std::size_t n = parts.size() == 3 ? parse_count(parts[2], o) : default_count;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  }
  if (n > 1) out.back() = hi;
  return out;
}

RunConfig build_run_config(const RawConfig& raw) {
  RunConfig cfg;
  for (const auto& sec : raw.sections) {
    if (sec.name.empty()) {
      check_keys(sec, kTop);
      for (const auto& [k, e] : sec.entries) {
        if (k == "theorem") {
          cfg.theorem = e.value;
        } else if (k == "families") {
          cfg.families_given = true;
          for (const auto& name : split(e.value, ',')) {
            if (!name.empty()) cfg.families.push_back(family_from_name(name, e.origin));
          }
        } else if (k == "zprofile") {
          if (e.value != "gaussian" && e.value != "exponential") error(e.origin, "unknown z profile '" + e.value + "'");
          cfg.zprofile = e.value;
        } else if (k == "zscale") {
          cfg.zscale = parse_number(e.value, e.origin);
          if (!(cfg.zscale > 0.0)) error(e.origin, "zscale must be positive");
        } else if (k == "lambdas") {
          cfg.lambdas = parse_values(e.value, e.origin);
        } else if (k == "out") {
          cfg.out = e.value;
        } else if (k == "json") {
          cfg.json = e.value;
        } else if (k == "tol") {
          cfg.tol = parse_number(e.value, e.origin);
        } else if (k == "threads") {
          cfg.threads = static_cast<int>(parse_count(e.value, e.origin));
        }
      }
    } else if (sec.name == "params") {
      check_keys(sec, kParams);
      for (const auto& [k, e] : sec.entries) cfg.params[k] = {parse_values(e.value, e.origin), e.origin};
    } else if (sec.name == "grid") {
      check_keys(sec, kGrid);
      for (const auto& [k, e] : sec.entries) {
        if (k == "n") cfg.grid.n = parse_count(e.value, e.origin);
        else if (k == "zbar_n") cfg.grid.zbar_n = parse_count(e.value, e.origin);
        else if (k == "rmin") cfg.grid.rmin = parse_number(e.value, e.origin);
        else if (k == "rmax") cfg.grid.rmax = parse_number(e.value, e.origin);
        else if (k == "zbar_min") cfg.grid.zbar_min = parse_number(e.value, e.origin);
        else if (k == "zbar_max") cfg.grid.zbar_max = parse_number(e.value, e.origin);
      }
    } else if (sec.name == "family") {
      check_keys(sec, kFamily);
      cfg.families_given = true;
      const auto kind = sec.entries.find("kind");
      if (kind == sec.entries.end()) error(sec.origin, "[family] needs a kind");
      FamilyEntry f = family_from_name(kind->second.value, kind->second.origin);
      for (const auto& [k, e] : sec.entries) {
        if (k == "scale") f.scale = parse_number(e.value, e.origin);
        else if (k == "tail_exponent") f.tail_exponent = parse_number(e.value, e.origin);
        else if (k == "transition") f.transition = parse_number(e.value, e.origin);
        else if (k == "cutoff") f.cutoff = parse_number(e.value, e.origin);
      }
      cfg.families.push_back(f);
    } else {
      error(sec.origin, "unknown section [" + sec.name + "]");
    }
  }
  return cfg;
}

std::vector<std::string> param_keys(const std::string& theorem) {
  if (theorem == "ckn-classical" || theorem == "ckn-radial") {
    return {"n", "p", "q", "r", "a", "alpha", "beta", "gamma", "sigma"};
  }
  if (theorem == "trace" || theorem == "trace-radial" || theorem == "trace-operator") {
    return {"n", "p", "q", "alpha", "beta"};
  }
  if (theorem == "ddd") return {"n", "p", "q", "alpha", "beta", "gamma"};
  throw ConfigError("unknown theorem '" + theorem + "'");
}

std::vector<ParamPoint> expand_params(const RunConfig& cfg, const std::vector<std::string>& keys) {
  const bool interp = std::find(keys.begin(), keys.end(), "sigma") != keys.end();
  std::vector<std::string> swept;
  for (const auto& k : keys) {
    if (k == "sigma" && !cfg.params.count(k)) continue;
    const auto it = cfg.params.find(k);
    if (it == cfg.params.end()) throw ConfigError("missing parameter '" + k + "'");
    if (k == "n") {
      for (double v : it->second.values) {
        if (v != std::floor(v) || v < 1.0) error(it->second.origin, "n must be a positive integer");
      }
    }
    swept.push_back(k);
  }
  for (const auto& [k, pv] : cfg.params) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      error(pv.origin, "parameter '" + k + "' does not belong to " + cfg.theorem);
    }
  }
  std::vector<ParamPoint> points{{}};
  for (const auto& k : swept) {
    std::vector<ParamPoint> next;
    for (const auto& base : points) {
      for (double v : cfg.params.at(k).values) {
        auto p = base;
        p[k] = v;
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  if (interp) {
    for (auto& p : points) {
      const double a = p["a"], beta = p["beta"], gamma = p["gamma"];
      const auto given = cfg.params.find("sigma");
      if (given == cfg.params.end()) {
        p["sigma"] = a == 0.0 ? 0.0 : (gamma - (1.0 - a) * beta) / a;
        continue;
      }
      const double sigma = p["sigma"];
      const double gap = gamma - (a * sigma + (1.0 - a) * beta);
      const double scale = std::max({1.0, std::abs(gamma), std::abs(sigma), std::abs(beta)});
      if (a != 0.0 && std::abs(gap) > 1e-12 * scale) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "sigma = " << sigma << " breaks γ = aσ + (1−a)β (gamma - a sigma - (1 - a) beta = " << gap << ")";
        error(given->second.origin, msg.str());
      }
    }
  }
  return points;
}

}  // namespace radcli
