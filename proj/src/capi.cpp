#include "radineq/radineq.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "radineq/error.hpp"
#include "radineq/exponents.hpp"
#include "radineq/fields.hpp"
#include "radineq/grids.hpp"
#include "radineq/kernels.hpp"
#include "radineq/multconv.hpp"
#include "radineq/operators.hpp"
#include "radineq/verify.hpp"

using namespace radineq;

struct radineq_grid {
  LogGrid grid;
};
struct radineq_report {
  AdmissibilityReport report;
};
struct radineq_profile {
  RadialProfile profile;
};
struct radineq_field {
  HalfSpaceField field;
};
struct radineq_result {
  OperatorResult result;
};
struct radineq_scan {
  FamilyScan scan;
};

namespace {

thread_local std::string last_error;

radineq_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return RADINEQ_INVALID_ARGUMENT;
    case ErrorCode::domain: return RADINEQ_DOMAIN;
    case ErrorCode::numerical: return RADINEQ_NUMERICAL;
  }
  return RADINEQ_INTERNAL;
}

template <class F>
radineq_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return RADINEQ_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return RADINEQ_INTERNAL;
}

template <class T>
void need(const T* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::invalid_argument, std::string("null ") + what);
}

CknParams conv(const radineq_ckn_params& p) {
  return {p.n, p.p, p.q, p.r, p.a, p.alpha, p.beta, p.gamma, p.sigma};
}
TraceParams conv(const radineq_trace_params& p) { return {p.n, p.p, p.q, p.alpha, p.beta}; }
DddParams conv(const radineq_ddd_params& p) { return {p.n, p.p, p.q, p.alpha, p.beta, p.gamma}; }

Family conv(radineq_family f) {
  switch (f) {
    case RADINEQ_GAUSSIAN: return Family::gaussian;
    case RADINEQ_BUMP: return Family::bump;
    case RADINEQ_POWER_TAIL: return Family::power_tail;
  }
  fail(ErrorCode::invalid_argument, "unknown family");
}

radineq_family back(Family f) {
  switch (f) {
    case Family::gaussian: return RADINEQ_GAUSSIAN;
    case Family::bump: return RADINEQ_BUMP;
    case Family::power_tail: return RADINEQ_POWER_TAIL;
  }
  return RADINEQ_GAUSSIAN;
}

FamilySpec conv(const radineq_family_spec& s) {
  return {conv(s.family), s.scale, s.tail_exponent, s.transition, s.cutoff};
}
radineq_family_spec back(const FamilySpec& s) {
  return {back(s.family), s.scale, s.tail_exponent, s.transition, s.cutoff};
}

ZSpec conv(const radineq_zspec& z) {
  if (z.kind != RADINEQ_Z_GAUSSIAN && z.kind != RADINEQ_Z_EXPONENTIAL) {
    fail(ErrorCode::invalid_argument, "unknown z profile");
  }
  return {z.kind == RADINEQ_Z_GAUSSIAN ? ZProfile::gaussian : ZProfile::exponential, z.scale};
}
radineq_zspec back(const ZSpec& z) {
  return {z.kind == ZProfile::gaussian ? RADINEQ_Z_GAUSSIAN : RADINEQ_Z_EXPONENTIAL, z.scale};
}

radineq_theorem back(Theorem t) {
  switch (t) {
    case Theorem::ckn_classical: return RADINEQ_CKN_CLASSICAL;
    case Theorem::ckn_radial: return RADINEQ_CKN_RADIAL;
    case Theorem::trace_radial: return RADINEQ_TRACE_RADIAL;
    case Theorem::trace_operator: return RADINEQ_TRACE_OPERATOR;
    case Theorem::ddd: return RADINEQ_DDD;
  }
  return RADINEQ_CKN_RADIAL;
}

radineq_ratio_record back(const RatioRecord& r) {
  radineq_ratio_record out{};
  out.theorem = back(r.theorem);
  out.family = back(r.family);
  out.zprofile = back(r.zprofile);
  out.lambda = r.lambda;
  out.lhs = r.lhs;
  out.rhs = r.rhs;
  out.ratio = r.ratio;
  out.flags = (r.flags.zero_over_zero ? unsigned{RADINEQ_FLAG_ZERO_OVER_ZERO} : 0u) |
              (r.flags.nonfinite ? unsigned{RADINEQ_FLAG_NONFINITE} : 0u) |
              (r.flags.truncated ? unsigned{RADINEQ_FLAG_TRUNCATED} : 0u);
  return out;
}

std::vector<FamilySpec> specs_of(const radineq_family_spec* specs, size_t count) {
  if (count > 0) need(specs, "family list");
  std::vector<FamilySpec> out;
  for (size_t i = 0; i < count; ++i) out.push_back(conv(specs[i]));
  return out;
}

ScanOptions opts_of(const radineq_scan_options* o) {
  ScanOptions s;
  if (o != nullptr) {
    s.require_admissible = o->require_admissible != 0;
    s.check_refinement = o->check_refinement != 0;
    s.threads = o->threads;
  }
  return s;
}

template <class Scan>
void slope_out(const Scan& s, double* slope, int* flagged) {
  need(slope, "output");
  *slope = s.slope;
  if (flagged != nullptr) *flagged = s.flagged ? 1 : 0;
}

}  // namespace

extern "C" {

const char* radineq_last_error(void) { return last_error.c_str(); }
const char* radineq_version(void) { return "1.0.0"; }

const char* radineq_theorem_name(radineq_theorem t) {
  switch (t) {
    case RADINEQ_CKN_CLASSICAL: return "ckn-classical";
    case RADINEQ_CKN_RADIAL: return "ckn-radial";
    case RADINEQ_TRACE_RADIAL: return "trace";
    case RADINEQ_TRACE_OPERATOR: return "trace-operator";
    case RADINEQ_DDD: return "ddd";
  }
  return "unknown";
}

radineq_status radineq_parse_theorem(const char* name, radineq_theorem* out) {
  return guard([&] {
    need(name, "name");
    need(out, "output");
    const std::string s(name);
    for (int t = RADINEQ_CKN_CLASSICAL; t <= RADINEQ_DDD; ++t) {
      if (s == radineq_theorem_name(static_cast<radineq_theorem>(t))) {
        *out = static_cast<radineq_theorem>(t);
        return;
      }
    }
    if (s == "trace-radial") {
      *out = RADINEQ_TRACE_RADIAL;
      return;
    }
    fail(ErrorCode::invalid_argument, "unknown theorem '" + s + "'");
  });
}

const char* radineq_family_name(radineq_family f) {
  switch (f) {
    case RADINEQ_GAUSSIAN: return "gaussian";
    case RADINEQ_BUMP: return "bump";
    case RADINEQ_POWER_TAIL: return "power_tail";
  }
  return "unknown";
}

radineq_status radineq_parse_family(const char* name, radineq_family* out) {
  return guard([&] {
    need(name, "name");
    need(out, "output");
    *out = back(parse_family(name));
  });
}

const char* radineq_zprofile_name(radineq_zprofile z) {
  return z == RADINEQ_Z_GAUSSIAN ? "gaussian" : "exponential";
}

radineq_status radineq_parse_zprofile(const char* name, radineq_zprofile* out) {
  return guard([&] {
    need(name, "name");
    need(out, "output");
    *out = parse_zprofile(name) == ZProfile::gaussian ? RADINEQ_Z_GAUSSIAN : RADINEQ_Z_EXPONENTIAL;
  });
}

radineq_family_spec radineq_default_family(radineq_family f) {
  radineq_family_spec s{f, 1.0, 0.0, 0.0, 0.0};
  if (f == RADINEQ_POWER_TAIL) s.tail_exponent = 4.0;
  return s;
}

radineq_status radineq_derive_sigma(double a, double gamma, double beta, double* sigma) {
  return guard([&] {
    need(sigma, "output");
    *sigma = derive_sigma(a, gamma, beta);
  });
}

radineq_status radineq_ckn_scaling_residual(const radineq_ckn_params* p, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    validate(conv(*p));
    *out = scaling_residual(conv(*p));
  });
}

radineq_status radineq_trace_scaling_residual(const radineq_trace_params* p, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    validate(conv(*p));
    *out = trace_scaling_residual(conv(*p));
  });
}

radineq_status radineq_ddd_scaling_residual(const radineq_ddd_params* p, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    validate(conv(*p));
    *out = ddd_scaling_residual(conv(*p));
  });
}

radineq_status radineq_check_ckn(radineq_theorem theorem, const radineq_ckn_params* p, double tol,
                                 radineq_report** out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    const Tolerance t{tol};
    if (theorem == RADINEQ_CKN_CLASSICAL) {
      *out = new radineq_report{check_ckn_classical(conv(*p), t)};
    } else if (theorem == RADINEQ_CKN_RADIAL) {
      *out = new radineq_report{check_ckn_radial(conv(*p), t)};
    } else {
      fail(ErrorCode::invalid_argument, "interpolation parameters go with ckn-classical or ckn-radial");
    }
  });
}

radineq_status radineq_check_trace(radineq_theorem theorem, const radineq_trace_params* p, double tol,
                                   radineq_report** out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    const Tolerance t{tol};
    if (theorem == RADINEQ_TRACE_RADIAL) {
      *out = new radineq_report{check_trace_radial(conv(*p), t)};
    } else if (theorem == RADINEQ_TRACE_OPERATOR) {
      *out = new radineq_report{check_trace_operator(conv(*p), t)};
    } else {
      fail(ErrorCode::invalid_argument, "trace parameters go with trace or trace-operator");
    }
  });
}

radineq_status radineq_check_ddd(const radineq_ddd_params* p, double tol, radineq_report** out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    *out = new radineq_report{check_ddd(conv(*p), Tolerance{tol})};
  });
}

int radineq_report_verdict(const radineq_report* r) { return r != nullptr && r->report.verdict ? 1 : 0; }
size_t radineq_report_size(const radineq_report* r) { return r ? r->report.conditions.size() : 0; }

radineq_status radineq_report_condition(const radineq_report* r, size_t i, radineq_condition* out) {
  return guard([&] {
    need(r, "report");
    need(out, "output");
    if (i >= r->report.conditions.size()) fail(ErrorCode::invalid_argument, "condition index out of range");
    const auto& c = r->report.conditions[i];
    *out = {c.label.c_str(), c.satisfied ? 1 : 0, c.residual, c.vacuous ? 1 : 0};
  });
}

void radineq_report_free(radineq_report* r) { delete r; }

radineq_status radineq_grid_create(double rmin, double rmax, size_t n, radineq_grid** out) {
  return guard([&] {
    need(out, "output");
    *out = new radineq_grid{LogGrid(rmin, rmax, n)};
  });
}

radineq_status radineq_grid_refined(const radineq_grid* g, radineq_grid** out) {
  return guard([&] {
    need(g, "grid");
    need(out, "output");
    *out = new radineq_grid{g->grid.refined()};
  });
}

size_t radineq_grid_size(const radineq_grid* g) { return g ? g->grid.size() : 0; }
double radineq_grid_node(const radineq_grid* g, size_t i) {
  return g && i < g->grid.size() ? g->grid.node(i) : NAN;
}
void radineq_grid_free(radineq_grid* g) { delete g; }

radineq_status radineq_profile_create(const radineq_grid* g, const radineq_family_spec* spec,
                                      radineq_profile** out) {
  return guard([&] {
    need(g, "grid");
    need(spec, "family");
    need(out, "output");
    *out = new radineq_profile{make_radial(conv(*spec), g->grid)};
  });
}

radineq_status radineq_profile_dilate(const radineq_profile* u, double lambda, radineq_profile** out) {
  return guard([&] {
    need(u, "profile");
    need(out, "output");
    *out = new radineq_profile{dilate(u->profile, lambda)};
  });
}

size_t radineq_profile_size(const radineq_profile* u) { return u ? u->profile.u.size() : 0; }

radineq_status radineq_profile_values(const radineq_profile* u, double* values, double* derivative) {
  return guard([&] {
    need(u, "profile");
    const auto& p = u->profile;
    if (values) std::copy(p.u.begin(), p.u.end(), values);
    if (derivative) std::copy(p.du.begin(), p.du.end(), derivative);
  });
}

void radineq_profile_free(radineq_profile* u) { delete u; }

radineq_status radineq_field_create(const radineq_grid* rgrid, const radineq_grid* zgrid,
                                    const radineq_family_spec* u, const radineq_zspec* v, radineq_field** out) {
  return guard([&] {
    need(rgrid, "r grid");
    need(zgrid, "zbar grid");
    need(u, "family");
    need(v, "z profile");
    need(out, "output");
    *out = new radineq_field{make_halfspace(conv(*u), conv(*v), ProductGrid(rgrid->grid, zgrid->grid))};
  });
}

radineq_status radineq_field_dilate(const radineq_field* f, double lambda, radineq_field** out) {
  return guard([&] {
    need(f, "field");
    need(out, "output");
    *out = new radineq_field{dilate(f->field, lambda)};
  });
}

void radineq_field_free(radineq_field* f) { delete f; }

double radineq_unit_sphere_area(int d) {
  try {
    return unit_sphere_area(d);
  } catch (...) {
    return NAN;
  }
}

radineq_status radineq_kernel_I(double a, double z, int n, double* value, double* est_error) {
  return guard([&] {
    need(value, "output");
    const auto k = kernel_I(a, z, n);
    *value = k.value;
    if (est_error) *est_error = k.est_error;
  });
}

radineq_status radineq_kernel_I_closed_n3(double a, double z, double* value) {
  return guard([&] {
    need(value, "output");
    *value = kernel_I_closed_n3(a, z);
  });
}

radineq_status radineq_kernel_fit(int n, radineq_regime regime, double* exponent, double* residual) {
  return guard([&] {
    need(exponent, "output");
    AsymptoticRegime r;
    switch (regime) {
      case RADINEQ_SMALL_A: r = AsymptoticRegime::small_a; break;
      case RADINEQ_LARGE_R: r = AsymptoticRegime::large_r; break;
      case RADINEQ_SINGULAR: r = AsymptoticRegime::singular; break;
      default: fail(ErrorCode::invalid_argument, "unknown regime");
    }
    const auto fit = kernel_asymptotic_fit(n, r);
    *exponent = fit.exponent;
    if (residual) *residual = fit.residual;
  });
}

radineq_status radineq_mult_convolve(const radineq_grid* g, const double* f, const double* k,
                                     radineq_conv_method method, double* out, int* truncated) {
  return guard([&] {
    need(g, "grid");
    need(f, "f");
    need(k, "kernel");
    need(out, "output");
    const size_t n = g->grid.size();
    const HaarFunction hf(g->grid, std::vector<double>(f, f + n));
    const HaarFunction hk(g->grid, std::vector<double>(k, k + n));
    const auto r = method == RADINEQ_CONV_DIRECT ? mult_convolve_direct(hf, hk) : mult_convolve_fast(hf, hk);
    std::copy(r.result.samples.begin(), r.result.samples.end(), out);
    if (truncated) *truncated = r.truncated ? 1 : 0;
  });
}

radineq_status radineq_young_ratio(const radineq_grid* g, const double* f, const double* k, double p, double q,
                                   double s, double* out) {
  return guard([&] {
    need(g, "grid");
    need(f, "f");
    need(k, "kernel");
    need(out, "output");
    const size_t n = g->grid.size();
    *out = young_check(HaarFunction(g->grid, std::vector<double>(f, f + n)),
                       HaarFunction(g->grid, std::vector<double>(k, k + n)), p, q, s);
  });
}

radineq_status radineq_riesz(const radineq_profile* v, double gamma, int n, radineq_result** out) {
  return guard([&] {
    need(v, "profile");
    need(out, "output");
    *out = new radineq_result{riesz_radial(v->profile, gamma, n)};
  });
}

radineq_status radineq_representation_bound(const radineq_profile* u, int n, radineq_result** out,
                                            double* min_margin) {
  return guard([&] {
    need(u, "profile");
    need(out, "output");
    auto b = representation_bound(u->profile, n);
    if (min_margin) *min_margin = representation_margin(u->profile, b, n).min_margin;
    *out = new radineq_result{std::move(b)};
  });
}

radineq_status radineq_trace_apply(const radineq_field* f, int n, radineq_result** out) {
  return guard([&] {
    need(f, "field");
    need(out, "output");
    *out = new radineq_result{trace_apply(f->field, n)};
  });
}

radineq_status radineq_trace_direct(const radineq_field* f, int n, const double* rhos, size_t count,
                                    double* out) {
  return guard([&] {
    need(f, "field");
    if (count > 0) {
      need(rhos, "radii");
      need(out, "output");
    }
    const auto v = trace_apply_direct(f->field, n, std::span<const double>(rhos, count));
    std::copy(v.begin(), v.end(), out);
  });
}

radineq_status radineq_weighted_norm(const radineq_profile* u, double w, double p, int n, double* value,
                                     int* truncated) {
  return guard([&] {
    need(u, "profile");
    need(value, "output");
    const auto r = weighted_norm_radial(u->profile, w, p, n);
    *value = r.value;
    if (truncated) *truncated = r.truncated ? 1 : 0;
  });
}

size_t radineq_result_size(const radineq_result* r) { return r ? r->result.values.size() : 0; }
double radineq_result_rho(const radineq_result* r, size_t i) {
  return r && i < r->result.grid.size() ? r->result.grid.node(i) : NAN;
}
double radineq_result_value(const radineq_result* r, size_t i) {
  return r && i < r->result.values.size() ? r->result.values[i] : NAN;
}
int radineq_result_truncated(const radineq_result* r) { return r && r->result.report.truncated ? 1 : 0; }
void radineq_result_free(radineq_result* r) { delete r; }

radineq_status radineq_ckn_ratio(const radineq_profile* u, const radineq_ckn_params* p, radineq_ratio_record* out) {
  return guard([&] {
    need(u, "profile");
    need(p, "params");
    need(out, "output");
    *out = back(ckn_ratio(u->profile, conv(*p)));
  });
}

radineq_status radineq_trace_ratio(const radineq_field* f, const radineq_trace_params* p,
                                   radineq_ratio_record* out) {
  return guard([&] {
    need(f, "field");
    need(p, "params");
    need(out, "output");
    *out = back(trace_ratio(f->field, conv(*p)));
  });
}

radineq_status radineq_ddd_ratio(const radineq_profile* v, const radineq_ddd_params* p, radineq_ratio_record* out) {
  return guard([&] {
    need(v, "profile");
    need(p, "params");
    need(out, "output");
    *out = back(ddd_ratio(v->profile, conv(*p)));
  });
}

radineq_status radineq_hardy_step_ratio(const radineq_profile* u, double alpha, double p, int n, double* out) {
  return guard([&] {
    need(u, "profile");
    need(out, "output");
    *out = hardy_step_ratio(u->profile, alpha, p, n);
  });
}

radineq_status radineq_predicted_slope_ckn(const radineq_ckn_params* p, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    *out = predicted_slope(conv(*p));
  });
}

radineq_status radineq_predicted_slope_trace(const radineq_trace_params* p, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    *out = predicted_slope(conv(*p));
  });
}

radineq_status radineq_predicted_slope_ddd(const radineq_ddd_params* p, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "output");
    *out = predicted_slope(conv(*p));
  });
}

radineq_status radineq_dilation_slope_ckn(const radineq_profile* u, const radineq_ckn_params* p,
                                          const double* lambdas, size_t count, double* slope, int* flagged) {
  return guard([&] {
    need(u, "profile");
    need(p, "params");
    need(lambdas, "lambdas");
    slope_out(dilation_scan(u->profile, conv(*p), std::span<const double>(lambdas, count)), slope, flagged);
  });
}

radineq_status radineq_dilation_slope_trace(const radineq_field* f, const radineq_trace_params* p,
                                            const double* lambdas, size_t count, double* slope, int* flagged) {
  return guard([&] {
    need(f, "field");
    need(p, "params");
    need(lambdas, "lambdas");
    slope_out(dilation_scan(f->field, conv(*p), std::span<const double>(lambdas, count)), slope, flagged);
  });
}

radineq_status radineq_dilation_slope_ddd(const radineq_profile* v, const radineq_ddd_params* p,
                                          const double* lambdas, size_t count, double* slope, int* flagged) {
  return guard([&] {
    need(v, "profile");
    need(p, "params");
    need(lambdas, "lambdas");
    slope_out(dilation_scan(v->profile, conv(*p), std::span<const double>(lambdas, count)), slope, flagged);
  });
}

radineq_scan_options radineq_default_scan_options(void) { return {1, 1, 1}; }

radineq_status radineq_scan_ckn(const radineq_family_spec* specs, size_t count, const radineq_ckn_params* p,
                                const radineq_grid* g, const radineq_scan_options* opts, radineq_scan** out) {
  return guard([&] {
    need(p, "params");
    need(g, "grid");
    need(out, "output");
    const auto s = specs_of(specs, count);
    *out = new radineq_scan{family_scan(s, conv(*p), g->grid, opts_of(opts))};
  });
}

radineq_status radineq_scan_trace(const radineq_family_spec* specs, size_t count, const radineq_zspec* z,
                                  const radineq_trace_params* p, const radineq_grid* rgrid,
                                  const radineq_grid* zgrid, const radineq_scan_options* opts,
                                  radineq_scan** out) {
  return guard([&] {
    need(z, "z profile");
    need(p, "params");
    need(rgrid, "r grid");
    need(zgrid, "zbar grid");
    need(out, "output");
    const auto s = specs_of(specs, count);
    *out = new radineq_scan{
        family_scan(s, conv(*z), conv(*p), ProductGrid(rgrid->grid, zgrid->grid), opts_of(opts))};
  });
}

radineq_status radineq_scan_ddd(const radineq_family_spec* specs, size_t count, const radineq_ddd_params* p,
                                const radineq_grid* g, const radineq_scan_options* opts, radineq_scan** out) {
  return guard([&] {
    need(p, "params");
    need(g, "grid");
    need(out, "output");
    const auto s = specs_of(specs, count);
    *out = new radineq_scan{family_scan(s, conv(*p), g->grid, opts_of(opts))};
  });
}

radineq_scan_summary radineq_scan_get_summary(const radineq_scan* s) {
  if (s == nullptr) return {0, 0.0, 0.0, 0.0, 0};
  const auto& f = s->scan;
  return {f.records.size(), f.sup, f.sup_refined, f.refinement_change, f.stable ? 1 : 0};
}

radineq_status radineq_scan_record(const radineq_scan* s, size_t i, radineq_ratio_record* out) {
  return guard([&] {
    need(s, "scan");
    need(out, "output");
    if (i >= s->scan.records.size()) fail(ErrorCode::invalid_argument, "record index out of range");
    *out = back(s->scan.records[i]);
  });
}

void radineq_scan_free(radineq_scan* s) { delete s; }

}  // extern "C"
