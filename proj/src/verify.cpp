#include "radineq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include "radineq/error.hpp"
#include "radineq/operators.hpp"

namespace radineq {
namespace {

constexpr double kStableChange = 0.01;

void finish(RatioRecord& rec, double lhs, double rhs, bool truncated) {
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.flags.truncated = truncated;
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    rec.flags.nonfinite = true;
    rec.ratio = 0.0;
  } else if (rhs > 0.0) {
    rec.ratio = lhs / rhs;
  } else if (lhs == 0.0) {
    rec.flags.zero_over_zero = true;
    rec.ratio = 0.0;
  } else {
    rec.flags.nonfinite = true;
    rec.ratio = 0.0;
  }
}

// Runs body(i) for i < count on up to `threads` workers; the first exception wins.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr err;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= count || err) return;
        i = next++;
      }
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

SlopeResult fit_slope(std::span<const double> lambdas, std::vector<RatioRecord> records) {
  SlopeResult res;
  res.lambdas.assign(lambdas.begin(), lambdas.end());
  double mx = 0.0, my = 0.0;
  const double m = static_cast<double>(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (records[i].flags.any()) res.flagged = true;
    if (!(records[i].ratio > 0.0)) {
      fail(ErrorCode::numerical, "dilation scan hit a zero or undefined ratio");
    }
    mx += std::log(lambdas[i]);
    my += std::log(records[i].ratio);
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double dx = std::log(lambdas[i]) - mx;
    sxy += dx * (std::log(records[i].ratio) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) fail(ErrorCode::invalid_argument, "dilation scan needs distinct lambdas");
  res.slope = sxy / sxx;
  res.records = std::move(records);
  return res;
}

void require_lambdas(std::span<const double> lambdas) {
  if (lambdas.size() < 2) fail(ErrorCode::invalid_argument, "dilation scan needs at least two lambdas");
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) fail(ErrorCode::invalid_argument, "dilation factors must be positive");
  }
}

void require_admissible(const AdmissibilityReport& rep) {
  if (rep.verdict) return;
  std::string msg = "parameters outside the admissible region:";
  for (const auto& label : rep.failing()) msg += " " + label + ";";
  fail(ErrorCode::domain, msg);
}

double max_ratio(const std::vector<RatioRecord>& recs) {
  double sup = 0.0;
  for (const auto& r : recs) {
    if (!r.flags.nonfinite && !r.flags.zero_over_zero) sup = std::max(sup, r.ratio);
  }
  return sup;
}

template <class Eval>
FamilyScan scan(std::size_t count, const ScanOptions& opts, Eval eval) {
  FamilyScan out;
  out.records.resize(count);
  parallel_for(count, opts.threads, [&](std::size_t i) { out.records[i] = eval(i, false); });
  out.sup = max_ratio(out.records);
  if (opts.check_refinement) {
    std::vector<RatioRecord> fine(count);
    parallel_for(count, opts.threads, [&](std::size_t i) { fine[i] = eval(i, true); });
    out.sup_refined = max_ratio(fine);
    out.refinement_change = out.sup > 0.0 ? std::abs(out.sup_refined / out.sup - 1.0) : 0.0;
    out.stable = out.refinement_change < kStableChange;
  }
  return out;
}

}  // namespace

RatioRecord ckn_ratio(const RadialProfile& u, const CknParams& params) {
  validate(params);
  RatioRecord rec;
  rec.theorem = Theorem::ckn_radial;
  rec.params = params;
  rec.family = u.spec;
  const int n = params.n;
  const auto lhs = weighted_norm_radial(u, params.gamma, params.r, n);
  bool truncated = lhs.truncated;
  double rhs = 1.0;
  if (params.a > 0.0) {
    const auto g = weighted_norm_radial(u.du, u.grid, params.alpha, params.p, n);
    truncated = truncated || g.truncated;
    rhs *= std::pow(g.value, params.a);
  }
  if (params.a < 1.0) {
    const auto f = weighted_norm_radial(u, params.beta, params.q, n);
    truncated = truncated || f.truncated;
    rhs *= std::pow(f.value, 1.0 - params.a);
  }
  finish(rec, lhs.value, rhs, truncated);
  return rec;
}

RatioRecord trace_ratio(const HalfSpaceField& f, const TraceParams& params) {
  validate(params);
  RatioRecord rec;
  rec.theorem = Theorem::trace_radial;
  rec.params = params;
  rec.family = f.uspec;
  rec.zprofile = f.vspec;
  const auto lhs = weighted_norm_radial(f.trace0, f.pgrid.rgrid, -params.beta, params.q, params.n);
  const auto rhs = weighted_norm_halfspace(f.grad_mag, f.pgrid, params.alpha, params.p, params.n);
  finish(rec, lhs.value, rhs.value, lhs.truncated || rhs.truncated);
  return rec;
}

RatioRecord ddd_ratio(const RadialProfile& v, const DddParams& params) {
  validate(params);
  RatioRecord rec;
  rec.theorem = Theorem::ddd;
  rec.params = params;
  rec.family = v.spec;
  const auto t = riesz_radial(v, params.gamma, params.n);
  const auto lhs = weighted_norm_radial(t.values, v.grid, -params.beta, params.q, params.n);
  const auto rhs = weighted_norm_radial(v, params.alpha, params.p, params.n);
  finish(rec, lhs.value, rhs.value, t.report.truncated || lhs.truncated || rhs.truncated);
  return rec;
}

double hardy_step_ratio(const RadialProfile& u, double alpha, double p, int n) {
  if (std::abs(alpha * p + 1.0) < 1e-12) {
    fail(ErrorCode::domain, "alpha p = -1 is excluded: the Hardy step needs alpha p != -1");
  }
  const auto top = weighted_norm_radial(u, alpha, p, n);
  const auto bottom = weighted_norm_radial(u.du, u.grid, alpha + 1.0, p, n);
  if (top.truncated || bottom.truncated) fail(ErrorCode::numerical, "Hardy step norm truncated by the grid");
  if (!(bottom.value > 0.0) || !std::isfinite(top.value) || !std::isfinite(bottom.value)) {
    fail(ErrorCode::numerical, "Hardy step norms must be finite and nonzero");
  }
  return top.value / bottom.value;
}

double predicted_slope(const CknParams& params) { return -params.n * scaling_residual(params); }
double predicted_slope(const TraceParams& params) { return -trace_scaling_residual(params); }
double predicted_slope(const DddParams& params) { return -params.n * ddd_scaling_residual(params); }

SlopeResult dilation_scan(const RadialProfile& u, const CknParams& params,
                          std::span<const double> lambdas) {
  require_lambdas(lambdas);
  std::vector<RatioRecord> recs;
  for (double l : lambdas) {
    recs.push_back(ckn_ratio(dilate(u, l), params));
    recs.back().lambda = l;
  }
  return fit_slope(lambdas, std::move(recs));
}

SlopeResult dilation_scan(const HalfSpaceField& f, const TraceParams& params,
                          std::span<const double> lambdas) {
  require_lambdas(lambdas);
  std::vector<RatioRecord> recs;
  for (double l : lambdas) {
    recs.push_back(trace_ratio(dilate(f, l), params));
    recs.back().lambda = l;
  }
  return fit_slope(lambdas, std::move(recs));
}

SlopeResult dilation_scan(const RadialProfile& v, const DddParams& params,
                          std::span<const double> lambdas) {
  require_lambdas(lambdas);
  std::vector<RatioRecord> recs;
  for (double l : lambdas) {
    recs.push_back(ddd_ratio(dilate(v, l), params));
    recs.back().lambda = l;
  }
  return fit_slope(lambdas, std::move(recs));
}

FamilyScan family_scan(std::span<const FamilySpec> specs, const CknParams& params,
                       const LogGrid& grid, const ScanOptions& opts) {
  if (specs.empty()) fail(ErrorCode::invalid_argument, "nothing to scan");
  if (opts.require_admissible) require_admissible(check_ckn_radial(params));
  const LogGrid fine = grid.refined();
  return scan(specs.size(), opts, [&](std::size_t i, bool refined) {
    return ckn_ratio(make_radial(specs[i], refined ? fine : grid), params);
  });
}

FamilyScan family_scan(std::span<const FamilySpec> specs, const ZSpec& zprofile,
                       const TraceParams& params, const ProductGrid& grid,
                       const ScanOptions& opts) {
  if (specs.empty()) fail(ErrorCode::invalid_argument, "nothing to scan");
  if (opts.require_admissible) require_admissible(check_trace_radial(params));
  const ProductGrid fine = grid.refined();
  return scan(specs.size(), opts, [&](std::size_t i, bool refined) {
    return trace_ratio(make_halfspace(specs[i], zprofile, refined ? fine : grid), params);
  });
}

FamilyScan family_scan(std::span<const FamilySpec> specs, const DddParams& params,
                       const LogGrid& grid, const ScanOptions& opts) {
  if (specs.empty()) fail(ErrorCode::invalid_argument, "nothing to scan");
  if (opts.require_admissible) require_admissible(check_ddd(params));
  const LogGrid fine = grid.refined();
  return scan(specs.size(), opts, [&](std::size_t i, bool refined) {
    return ddd_ratio(make_radial(specs[i], refined ? fine : grid), params);
  });
}

}  // namespace radineq
