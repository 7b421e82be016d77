// radineq command line tool. Talks to the library through the C API only.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "radineq/radineq.h"

namespace {

using radcli::ConfigError;
using radcli::Origin;
using radcli::ParamPoint;
using radcli::RunConfig;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct ApiError : std::runtime_error {
  radineq_status status;
  ApiError(radineq_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(radineq_status s) {
  if (s != RADINEQ_OK) throw ApiError(s, radineq_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GridPtr = std::unique_ptr<radineq_grid, Deleter<radineq_grid, radineq_grid_free>>;
using ReportPtr = std::unique_ptr<radineq_report, Deleter<radineq_report, radineq_report_free>>;
using ProfilePtr = std::unique_ptr<radineq_profile, Deleter<radineq_profile, radineq_profile_free>>;
using FieldPtr = std::unique_ptr<radineq_field, Deleter<radineq_field, radineq_field_free>>;
using ResultPtr = std::unique_ptr<radineq_result, Deleter<radineq_result, radineq_result_free>>;
using ScanPtr = std::unique_ptr<radineq_scan, Deleter<radineq_scan, radineq_scan_free>>;

GridPtr make_grid(double a, double b, std::size_t n) {
  radineq_grid* g = nullptr;
  check(radineq_grid_create(a, b, n, &g));
  return GridPtr(g);
}

// ---- output ----

using Cell = std::variant<std::string, double, long long, bool>;
using Row = std::vector<std::pair<std::string, Cell>>;

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string q = "\"";
    for (char ch : *s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (const auto* d = std::get_if<double>(&c)) return fmt_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

std::string json_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return nlohmann::json(*s).dump();
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? fmt_double(*d) : "null";
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

std::string resolve_path(const std::string& path) {
  const char* dir = std::getenv("RADINEQ_OUT_DIR");
  if (dir == nullptr || *dir == '\0' || path.empty() || path == "-" || path.front() == '/') return path;
  return std::string(dir) + "/" + path;
}

// CSV to --out (stdout by default) and an optional JSON array mirror. Both
// files are opened before any computation so a bad path fails early.
class Sink {
 public:
  Sink(const std::optional<std::string>& out, const std::optional<std::string>& json) {
    if (out && *out != "-") {
      csv_file_.open(resolve_path(*out));
      if (!csv_file_) throw ConfigError("cannot write " + resolve_path(*out));
    }
    if (json) {
      json_file_.open(resolve_path(*json));
      if (!json_file_) throw ConfigError("cannot write " + resolve_path(*json));
    }
  }

  void write(const Row& row) {
    std::ostream& os = csv_file_.is_open() ? csv_file_ : std::cout;
    if (header_.empty()) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].first;
      os << "\n";
      for (const auto& [k, v] : row) header_.push_back(k);
    } else {
      bool same = header_.size() == row.size();
      for (std::size_t i = 0; same && i < row.size(); ++i) same = header_[i] == row[i].first;
      if (!same) throw ConfigError("rows in one run must share their columns");
    }
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i].second);
    os << "\n";
    if (json_file_.is_open()) {
      json_file_ << (rows_ ? ",\n" : "[\n") << "{";
      for (std::size_t i = 0; i < row.size(); ++i) {
        json_file_ << (i ? "," : "") << nlohmann::json(row[i].first).dump() << ":" << json_cell(row[i].second);
      }
      json_file_ << "}";
    }
    ++rows_;
  }

  void close() {
    if (json_file_.is_open()) {
      json_file_ << (rows_ ? "\n]\n" : "[]\n");
      json_file_.close();
    }
    if (csv_file_.is_open()) csv_file_.close();
    std::cout.flush();
  }

 private:
  std::ofstream csv_file_;
  std::ofstream json_file_;
  std::vector<std::string> header_;
  std::size_t rows_ = 0;
};

// Runs body(i) for i < count on a small pool; results keep index order.
template <class T, class F>
std::vector<T> pool_map(std::size_t count, int threads, F body) {
  std::vector<T> out(count);
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = body(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        {
          std::lock_guard lock(mu);
          if (err) return;
        }
        try {
          out[i] = body(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

// ---- shared options ----

struct Globals {
  std::optional<std::string> out;
  std::optional<std::string> json;
  std::optional<int> threads;
  std::optional<double> tol;
  bool strict = false;
};

struct InputFlags {
  std::string config;
  std::string theorem;
  std::map<std::string, std::string> params;
  std::map<std::string, std::string> grid;
  std::optional<std::string> families;
  std::optional<std::string> zprofile;
  std::optional<std::string> zscale;
  std::optional<std::string> lambdas;
};

void add_grid_flags(CLI::App* cmd, InputFlags& in) {
  for (const auto& [flag, key] : std::vector<std::pair<std::string, std::string>>{
           {"--rmin", "rmin"}, {"--rmax", "rmax"}, {"--grid-n", "n"},
           {"--zbar-min", "zbar_min"}, {"--zbar-max", "zbar_max"}, {"--zbar-n", "zbar_n"}}) {
    cmd->add_option_function<std::string>(flag, [&in, key = key](const std::string& v) { in.grid[key] = v; },
                                          "grid setting");
  }
}

void add_input_flags(CLI::App* cmd, InputFlags& in, bool with_params) {
  cmd->add_option("--config", in.config, "run configuration file");
  cmd->add_option("--theorem", in.theorem,
                  "ckn-classical, ckn-radial, trace, trace-operator or ddd");
  if (with_params) {
    for (const std::string k : {"n", "p", "q", "r", "a", "alpha", "beta", "gamma", "sigma"}) {
      cmd->add_option_function<std::string>("--" + k, [&in, k](const std::string& v) { in.params[k] = v; },
                                            "exponent value, rational or sweep start:stop:count");
    }
  }
  cmd->add_option("--family", in.families, "comma separated family list");
  cmd->add_option("--zprofile", in.zprofile, "gaussian or exponential");
  cmd->add_option("--zscale", in.zscale, "height profile scale");
  cmd->add_option("--lambdas", in.lambdas, "dilation factors for the slope check");
  add_grid_flags(cmd, in);
}

RunConfig load(const InputFlags& in, const Globals& g) {
  radcli::RawConfig raw = in.config.empty() ? radcli::RawConfig{} : radcli::parse_config_file(in.config);
  if (in.families) {
    std::erase_if(raw.sections, [](const radcli::RawSection& s) { return s.name == "family"; });
  }
  auto& top = raw.section("");
  auto flag = [](const std::string& name) { return Origin{"flag --" + name}; };
  if (!in.theorem.empty()) top.entries["theorem"] = {in.theorem, flag("theorem")};
  if (in.families) top.entries["families"] = {*in.families, flag("family")};
  if (in.zprofile) top.entries["zprofile"] = {*in.zprofile, flag("zprofile")};
  if (in.zscale) top.entries["zscale"] = {*in.zscale, flag("zscale")};
  if (in.lambdas) top.entries["lambdas"] = {*in.lambdas, flag("lambdas")};
  for (const auto& [k, v] : in.params) raw.section("params").entries[k] = {v, flag(k)};
  for (const auto& [k, v] : in.grid) {
    std::string name = k == "n" ? "grid-n" : k;
    std::replace(name.begin(), name.end(), '_', '-');
    raw.section("grid").entries[k] = {v, flag(name)};
  }
  RunConfig cfg = radcli::build_run_config(raw);
  if (g.out) cfg.out = g.out;
  if (g.json) cfg.json = g.json;
  if (g.threads) cfg.threads = g.threads;
  if (g.tol) cfg.tol = g.tol;
  if (cfg.theorem.empty()) throw ConfigError("no theorem selected (use --theorem or theorem = ...)");
  return cfg;
}

radineq_theorem theorem_of(const std::string& name) {
  radineq_theorem t;
  check(radineq_parse_theorem(name.c_str(), &t));
  return t;
}

radineq_ckn_params ckn_of(const ParamPoint& p) {
  return {static_cast<int>(p.at("n")), p.at("p"),    p.at("q"),     p.at("r"),    p.at("a"),
          p.at("alpha"),               p.at("beta"), p.at("gamma"), p.at("sigma")};
}
radineq_trace_params trace_of(const ParamPoint& p) {
  return {static_cast<int>(p.at("n")), p.at("p"), p.at("q"), p.at("alpha"), p.at("beta")};
}
radineq_ddd_params ddd_of(const ParamPoint& p) {
  return {static_cast<int>(p.at("n")), p.at("p"), p.at("q"), p.at("alpha"), p.at("beta"), p.at("gamma")};
}

enum class Kind { ckn, trace, ddd };

Kind kind_of(radineq_theorem t) {
  if (t == RADINEQ_CKN_CLASSICAL || t == RADINEQ_CKN_RADIAL) return Kind::ckn;
  if (t == RADINEQ_TRACE_RADIAL || t == RADINEQ_TRACE_OPERATOR) return Kind::trace;
  return Kind::ddd;
}

ReportPtr report_for(radineq_theorem t, const ParamPoint& p, double tol) {
  radineq_report* r = nullptr;
  switch (kind_of(t)) {
    case Kind::ckn: {
      const auto c = ckn_of(p);
      check(radineq_check_ckn(t, &c, tol, &r));
      break;
    }
    case Kind::trace: {
      const auto c = trace_of(p);
      check(radineq_check_trace(t, &c, tol, &r));
      break;
    }
    case Kind::ddd: {
      const auto c = ddd_of(p);
      check(radineq_check_ddd(&c, tol, &r));
      break;
    }
  }
  return ReportPtr(r);
}

void add_params(Row& row, const std::string& theorem, const ParamPoint& p, const std::vector<std::string>& keys) {
  row.emplace_back("theorem", theorem);
  for (const auto& k : keys) {
    if (k == "n") row.emplace_back(k, static_cast<long long>(p.at(k)));
    else row.emplace_back(k, p.at(k));
  }
}

std::vector<radineq_family_spec> family_specs(const RunConfig& cfg) {
  std::vector<radineq_family_spec> out;
  if (!cfg.families_given) {
    for (auto f : {RADINEQ_GAUSSIAN, RADINEQ_BUMP, RADINEQ_POWER_TAIL}) out.push_back(radineq_default_family(f));
    return out;
  }
  for (const auto& f : cfg.families) {
    radineq_family_spec s{};
    check(radineq_parse_family(f.kind.c_str(), &s.family));
    s.scale = f.scale;
    s.tail_exponent = s.family == RADINEQ_POWER_TAIL ? f.tail_exponent : 0.0;
    s.transition = f.transition;
    s.cutoff = f.cutoff;
    out.push_back(s);
  }
  return out;
}

std::string family_label(const radineq_family_spec& s) { return radineq_family_name(s.family); }

void add_family(Row& row, const radineq_family_spec& s) {
  row.emplace_back("family", family_label(s));
  row.emplace_back("scale", s.scale);
  row.emplace_back("tail_exponent", s.tail_exponent);
  row.emplace_back("transition", s.transition);
  row.emplace_back("cutoff", s.cutoff);
}

std::string flag_text(unsigned flags, bool admissible) {
  std::string s;
  auto add = [&](const char* w) { s += (s.empty() ? "" : "|") + std::string(w); };
  if (flags & RADINEQ_FLAG_ZERO_OVER_ZERO) add("zero_over_zero");
  if (flags & RADINEQ_FLAG_NONFINITE) add("nonfinite");
  if (flags & RADINEQ_FLAG_TRUNCATED) add("truncated");
  if (!admissible) add("inadmissible");
  return s.empty() ? "none" : s;
}

radineq_zspec zspec_of(const RunConfig& cfg) {
  radineq_zspec z{};
  check(radineq_parse_zprofile(cfg.zprofile.c_str(), &z.kind));
  z.scale = cfg.zscale;
  return z;
}

// ---- subcommands ----

int run_check(const InputFlags& in, const Globals& g) {
  const RunConfig cfg = load(in, g);
  Sink sink(cfg.out, cfg.json);
  const auto t = theorem_of(cfg.theorem);
  const auto keys = radcli::param_keys(cfg.theorem);
  for (const auto& p : radcli::expand_params(cfg, keys)) {
    const auto rep = report_for(t, p, cfg.tol.value_or(1e-12));
    const bool verdict = radineq_report_verdict(rep.get()) != 0;
    for (std::size_t i = 0; i < radineq_report_size(rep.get()); ++i) {
      radineq_condition c;
      check(radineq_report_condition(rep.get(), i, &c));
      Row row;
      add_params(row, radineq_theorem_name(t), p, keys);
      row.emplace_back("condition", std::string(c.label));
      row.emplace_back("satisfied", c.satisfied != 0);
      row.emplace_back("residual", c.residual);
      row.emplace_back("vacuous", c.vacuous != 0);
      row.emplace_back("verdict", verdict);
      sink.write(row);
    }
  }
  sink.close();
  return 0;
}

struct VerifyCell {
  ParamPoint point;
  radineq_family_spec family{};
  radineq_ratio_record rec{};
  bool admissible = true;
  double slope = NAN;
  double predicted = NAN;
};

int run_verify(const InputFlags& in, const Globals& g) {
  const RunConfig cfg = load(in, g);
  const auto t = theorem_of(cfg.theorem);
  const auto kind = kind_of(t);
  const auto keys = radcli::param_keys(cfg.theorem);
  const auto points = radcli::expand_params(cfg, keys);
  const auto fams = family_specs(cfg);
  if (fams.empty()) throw ApiError(RADINEQ_INVALID_ARGUMENT, "nothing to scan");
  const auto zs = zspec_of(cfg);
  const auto& gs = cfg.grid;
  Sink sink(cfg.out, cfg.json);
  const auto rgrid = make_grid(gs.rmin, gs.rmax, gs.n);
  const auto zgrid = make_grid(gs.zbar_min, gs.zbar_max, gs.zbar_n);

  const std::size_t cells = points.size() * fams.size();
  const auto results = pool_map<VerifyCell>(cells, cfg.threads.value_or(1), [&](std::size_t i) {
    VerifyCell c;
    c.point = points[i / fams.size()];
    c.family = fams[i % fams.size()];
    c.admissible = radineq_report_verdict(report_for(t, c.point, cfg.tol.value_or(1e-12)).get()) != 0;
    const double* lam = cfg.lambdas.data();
    const std::size_t nl = cfg.lambdas.size();
    if (kind == Kind::trace) {
      radineq_field* f = nullptr;
      check(radineq_field_create(rgrid.get(), zgrid.get(), &c.family, &zs, &f));
      const FieldPtr field(f);
      const auto p = trace_of(c.point);
      check(radineq_trace_ratio(field.get(), &p, &c.rec));
      check(radineq_predicted_slope_trace(&p, &c.predicted));
      if (c.rec.ratio > 0.0) check(radineq_dilation_slope_trace(field.get(), &p, lam, nl, &c.slope, nullptr));
    } else {
      radineq_profile* u = nullptr;
      check(radineq_profile_create(rgrid.get(), &c.family, &u));
      const ProfilePtr prof(u);
      if (kind == Kind::ckn) {
        const auto p = ckn_of(c.point);
        check(radineq_ckn_ratio(prof.get(), &p, &c.rec));
        check(radineq_predicted_slope_ckn(&p, &c.predicted));
        if (c.rec.ratio > 0.0) check(radineq_dilation_slope_ckn(prof.get(), &p, lam, nl, &c.slope, nullptr));
      } else {
        const auto p = ddd_of(c.point);
        check(radineq_ddd_ratio(prof.get(), &p, &c.rec));
        check(radineq_predicted_slope_ddd(&p, &c.predicted));
        if (c.rec.ratio > 0.0) check(radineq_dilation_slope_ddd(prof.get(), &p, lam, nl, &c.slope, nullptr));
      }
    }
    return c;
  });

  bool flagged = false;
  for (const auto& c : results) {
    Row row;
    add_params(row, radineq_theorem_name(t), c.point, keys);
    add_family(row, c.family);
    if (kind == Kind::trace) {
      row.emplace_back("zprofile", std::string(radineq_zprofile_name(zs.kind)));
      row.emplace_back("zscale", zs.scale);
    }
    row.emplace_back("lhs", c.rec.lhs);
    row.emplace_back("rhs", c.rec.rhs);
    row.emplace_back("ratio", c.rec.ratio);
    row.emplace_back("dilation_slope", c.slope);
    row.emplace_back("predicted_slope", c.predicted);
    row.emplace_back("flags", flag_text(c.rec.flags, c.admissible));
    sink.write(row);
    flagged = flagged || (c.rec.flags & (RADINEQ_FLAG_TRUNCATED | RADINEQ_FLAG_NONFINITE));
  }
  sink.close();
  return g.strict && flagged ? kExitNumerical : 0;
}

int run_scan(const InputFlags& in, const Globals& g, bool refine) {
  const RunConfig cfg = load(in, g);
  const auto t = theorem_of(cfg.theorem);
  const auto kind = kind_of(t);
  const auto keys = radcli::param_keys(cfg.theorem);
  const auto points = radcli::expand_params(cfg, keys);
  const auto fams = family_specs(cfg);
  if (fams.empty()) throw ApiError(RADINEQ_INVALID_ARGUMENT, "nothing to scan");
  const auto zs = zspec_of(cfg);
  const auto& gs = cfg.grid;
  Sink sink(cfg.out, cfg.json);
  const auto rgrid = make_grid(gs.rmin, gs.rmax, gs.n);
  const auto zgrid = make_grid(gs.zbar_min, gs.zbar_max, gs.zbar_n);
  // the parameter sweep is the outer loop; boundary cells are scanned too
  const radineq_scan_options opts{0, refine ? 1 : 0, 1};

  struct Cell {
    bool admissible = true;
    radineq_scan_summary sum{};
    std::string argmax;
    bool flagged = false;
  };
  const auto results = pool_map<Cell>(points.size(), cfg.threads.value_or(1), [&](std::size_t i) {
    Cell c;
    c.admissible = radineq_report_verdict(report_for(t, points[i], cfg.tol.value_or(1e-12)).get()) != 0;
    radineq_scan* s = nullptr;
    if (kind == Kind::ckn) {
      const auto p = ckn_of(points[i]);
      check(radineq_scan_ckn(fams.data(), fams.size(), &p, rgrid.get(), &opts, &s));
    } else if (kind == Kind::trace) {
      const auto p = trace_of(points[i]);
      check(radineq_scan_trace(fams.data(), fams.size(), &zs, &p, rgrid.get(), zgrid.get(), &opts, &s));
    } else {
      const auto p = ddd_of(points[i]);
      check(radineq_scan_ddd(fams.data(), fams.size(), &p, rgrid.get(), &opts, &s));
    }
    const ScanPtr scan(s);
    c.sum = radineq_scan_get_summary(scan.get());
    double best = -1.0;
    for (std::size_t k = 0; k < c.sum.count; ++k) {
      radineq_ratio_record r;
      check(radineq_scan_record(scan.get(), k, &r));
      if (r.flags & (RADINEQ_FLAG_TRUNCATED | RADINEQ_FLAG_NONFINITE)) c.flagged = true;
      if (r.ratio > best) {
        best = r.ratio;
        c.argmax = family_label(r.family) + ":" + fmt_double(r.family.scale);
      }
    }
    return c;
  });

  bool flagged = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& c = results[i];
    Row row;
    add_params(row, radineq_theorem_name(t), points[i], keys);
    row.emplace_back("admissible", c.admissible);
    row.emplace_back("families", static_cast<long long>(c.sum.count));
    row.emplace_back("sup", c.sum.sup);
    row.emplace_back("argmax", c.argmax);
    row.emplace_back("sup_refined", refine ? c.sum.sup_refined : NAN);
    row.emplace_back("refinement_change", refine ? c.sum.refinement_change : NAN);
    row.emplace_back("stable", c.sum.stable != 0);
    row.emplace_back("flags", std::string(c.flagged ? "truncated" : "none"));
    sink.write(row);
    flagged = flagged || c.flagged || !c.sum.stable;
  }
  sink.close();
  return g.strict && flagged ? kExitNumerical : 0;
}

struct OperatorFlags {
  std::string op = "riesz";
  int n = 3;
  double gamma = 2.0;
  std::string family = "gaussian";
  double scale = 1.0;
  double tail_exponent = 4.0;
  double transition = 0.0;
  double cutoff = 0.0;
  std::string zprofile = "gaussian";
  double zscale = 1.0;
  InputFlags grid;
};

int run_eval(const OperatorFlags& o, const Globals& g) {
  radcli::RawConfig raw;
  for (const auto& [k, v] : o.grid.grid) raw.section("grid").entries[k] = {v, {"flag --" + k}};
  const auto gs = radcli::build_run_config(raw).grid;
  Sink sink(g.out, g.json);
  radineq_family_spec spec{};
  check(radineq_parse_family(o.family.c_str(), &spec.family));
  spec.scale = o.scale;
  spec.tail_exponent = spec.family == RADINEQ_POWER_TAIL ? o.tail_exponent : 0.0;
  spec.transition = o.transition;
  spec.cutoff = o.cutoff;
  const auto rgrid = make_grid(gs.rmin, gs.rmax, gs.n);
  radineq_result* res = nullptr;
  if (o.op == "riesz" || o.op == "representation") {
    radineq_profile* u = nullptr;
    check(radineq_profile_create(rgrid.get(), &spec, &u));
    const ProfilePtr prof(u);
    if (o.op == "riesz") check(radineq_riesz(prof.get(), o.gamma, o.n, &res));
    else check(radineq_representation_bound(prof.get(), o.n, &res, nullptr));
  } else if (o.op == "trace") {
    radineq_zspec zs{};
    check(radineq_parse_zprofile(o.zprofile.c_str(), &zs.kind));
    zs.scale = o.zscale;
    const auto zgrid = make_grid(gs.zbar_min, gs.zbar_max, gs.zbar_n);
    radineq_field* f = nullptr;
    check(radineq_field_create(rgrid.get(), zgrid.get(), &spec, &zs, &f));
    const FieldPtr field(f);
    check(radineq_trace_apply(field.get(), o.n, &res));
  } else {
    throw ConfigError("flag --op: expected riesz, trace or representation, got '" + o.op + "'");
  }
  const ResultPtr result(res);
  for (std::size_t i = 0; i < radineq_result_size(result.get()); ++i) {
    sink.write({{"rho", radineq_result_rho(result.get(), i)}, {"value", radineq_result_value(result.get(), i)}});
  }
  sink.close();
  if (radineq_result_truncated(result.get())) {
    std::cerr << "warning: the operator input does not decay at a grid end\n";
    if (g.strict) return kExitNumerical;
  }
  return 0;
}

struct KernelFlags {
  int n = 3;
  std::string a_range = "1e-2:1e2";
  std::string z_range = "1e-2:1e2";
  std::size_t points = 40;
};

int run_kernel_table(const KernelFlags& k, const Globals& g) {
  const auto as = radcli::parse_log_range(k.a_range, k.points, {"flag --a-range"});
  const auto zs = radcli::parse_log_range(k.z_range, k.points, {"flag --z-range"});
  Sink sink(g.out, g.json);
  struct Val {
    double value = 0.0, err = 0.0;
  };
  const auto vals = pool_map<Val>(as.size() * zs.size(), g.threads.value_or(1), [&](std::size_t i) {
    Val v;
    check(radineq_kernel_I(as[i / zs.size()], zs[i % zs.size()], k.n, &v.value, &v.err));
    return v;
  });
  for (std::size_t i = 0; i < vals.size(); ++i) {
    sink.write({{"a", as[i / zs.size()]}, {"z", zs[i % zs.size()]}, {"value", vals[i].value},
                {"est_error", vals[i].err}});
  }
  sink.close();
  return 0;
}

struct BenchFlags {
  std::string sizes = "1024..65536";
  int repeat = 3;
  std::size_t max_direct = 65536;
  unsigned long long seed = 1;
};

int run_bench(const BenchFlags& b, const Globals& g) {
  const Origin o{"flag --n"};
  const auto dots = b.sizes.find("..");
  std::size_t lo = 0, hi = 0;
  try {
    lo = std::stoul(b.sizes.substr(0, dots));
    hi = dots == std::string::npos ? lo : std::stoul(b.sizes.substr(dots + 2));
  } catch (const std::exception&) {
    throw ConfigError(o.where + ": expected N or N1..N2, got '" + b.sizes + "'");
  }
  if (lo < 8 || hi < lo) throw ConfigError(o.where + ": need 8 <= N1 <= N2");
  if (b.repeat < 1) throw ConfigError("flag --repeat: must be positive");
  Sink sink(g.out, g.json);
  std::mt19937_64 rng(b.seed);
  for (std::size_t n = lo; n <= hi; n *= 2) {
    const double h = 0.01;
    const double half = 0.5 * h * static_cast<double>(n - 1);
    const auto grid = make_grid(std::exp(-half), std::exp(half), n);
    std::uniform_real_distribution<double> shift(-0.1 * half, 0.1 * half);
    const double s1 = shift(rng), s2 = shift(rng), w = 0.1 * half;
    std::vector<double> f(n), k(n), out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = std::log(radineq_grid_node(grid.get(), i));
      f[i] = std::exp(-std::pow((t - s1) / w, 2));
      k[i] = std::exp(-std::pow((t - s2) / w, 2));
    }
    auto time_ms = [&](radineq_conv_method m) {
      double best = INFINITY;
      for (int r = 0; r < b.repeat; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        check(radineq_mult_convolve(grid.get(), f.data(), k.data(), m, out.data(), nullptr));
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
      }
      return best;
    };
    const double direct = n <= b.max_direct ? time_ms(RADINEQ_CONV_DIRECT) : NAN;
    const double fast = time_ms(RADINEQ_CONV_FAST);
    sink.write({{"N", static_cast<long long>(n)}, {"direct_ms", direct}, {"fast_ms", fast}});
    if (n > hi / 2) break;
  }
  sink.close();
  return 0;
}

int exit_for(radineq_status s) {
  return s == RADINEQ_NUMERICAL || s == RADINEQ_INTERNAL ? kExitNumerical : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radineq: weighted interpolation and trace inequalities for radial functions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "CSV output path (stdout when absent)");
  app.add_option("--json", g.json, "JSON mirror of the CSV rows");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "admissibility tolerance")->check(CLI::NonNegativeNumber);
  app.add_flag("--strict", g.strict, "exit 2 when a result is truncation-dominated");

  InputFlags check_in, verify_in, scan_in;
  auto* check_cmd = app.add_subcommand("check-exponents", "admissibility report per condition");
  add_input_flags(check_cmd, check_in, true);

  auto* verify_cmd = app.add_subcommand("verify", "inequality ratios for test families");
  add_input_flags(verify_cmd, verify_in, true);

  bool no_refine = false;
  auto* scan_cmd = app.add_subcommand("scan", "parameter sweep times family scan");
  add_input_flags(scan_cmd, scan_in, true);
  scan_cmd->add_flag("--no-refine", no_refine, "skip the doubled-grid stability check");

  OperatorFlags op;
  auto* eval_cmd = app.add_subcommand("eval-operator", "sample an operator on the radial grid");
  eval_cmd->add_option("--op", op.op, "riesz, trace or representation");
  eval_cmd->add_option("--n", op.n, "dimension")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--gamma", op.gamma, "Riesz exponent");
  eval_cmd->add_option("--family", op.family, "gaussian, bump or power_tail");
  eval_cmd->add_option("--scale", op.scale);
  eval_cmd->add_option("--tail-exponent", op.tail_exponent);
  eval_cmd->add_option("--transition", op.transition);
  eval_cmd->add_option("--cutoff", op.cutoff);
  eval_cmd->add_option("--zprofile", op.zprofile);
  eval_cmd->add_option("--zscale", op.zscale);
  add_grid_flags(eval_cmd, op.grid);

  KernelFlags kf;
  auto* kernel_cmd = app.add_subcommand("kernel-table", "trace kernel on a log grid of (a, z)");
  kernel_cmd->add_option("--n", kf.n, "dimension")->check(CLI::Range(2, 64));
  kernel_cmd->add_option("--a-range", kf.a_range, "lo:hi or lo:hi:count");
  kernel_cmd->add_option("--z-range", kf.z_range, "lo:hi or lo:hi:count");
  kernel_cmd->add_option("--points", kf.points, "default count per axis")->check(CLI::PositiveNumber);

  BenchFlags bf;
  auto* bench_cmd = app.add_subcommand("bench-conv", "direct against FFT convolution timings");
  bench_cmd->add_option("--n", bf.sizes, "N or N1..N2 (doubling)");
  bench_cmd->add_option("--repeat", bf.repeat, "best of this many runs");
  bench_cmd->add_option("--max-direct", bf.max_direct, "skip the direct sum above this N");
  bench_cmd->add_option("--seed", bf.seed, "random shifts of the test pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*check_cmd) return run_check(check_in, g);
    if (*verify_cmd) return run_verify(verify_in, g);
    if (*scan_cmd) return run_scan(scan_in, g, !no_refine);
    if (*eval_cmd) return run_eval(op, g);
    if (*kernel_cmd) return run_kernel_table(kf, g);
    if (*bench_cmd) return run_bench(bf, g);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
