#pragma once

// Ratio computations for the weighted inequalities, dilation slopes and family
// scans. A ratio is lhs / rhs of the inequality for one test function; scans
// collect ratios, slopes measure how far the exponents are from scale balance.

#include <span>
#include <variant>
#include <vector>

#include "radineq/exponents.hpp"
#include "radineq/fields.hpp"
#include "radineq/grids.hpp"

namespace radineq {

struct RatioFlags {
  bool zero_over_zero = false;  // both sides vanish; ratio is reported as 0
  bool nonfinite = false;       // a norm overflowed or rhs == 0 < lhs
  bool truncated = false;       // some norm or operator hit a grid end
  bool any() const { return zero_over_zero || nonfinite || truncated; }
};

using AnyParams = std::variant<CknParams, TraceParams, DddParams>;

struct RatioRecord {
  Theorem theorem = Theorem::ckn_radial;
  AnyParams params;
  FamilySpec family;
  ZSpec zprofile;  // trace records only
  double lambda = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  RatioFlags flags;
};

/// ||x|^gamma u|_r / (||x|^alpha u'|_p^a ||x|^beta u|_q^(1-a)). Admissibility is not checked.
RatioRecord ckn_ratio(const RadialProfile& u, const CknParams& params);

/// |f(.,0)|x|^-beta|_q / ||(y,z)|^alpha grad f|_p.
RatioRecord trace_ratio(const HalfSpaceField& f, const TraceParams& params);

/// ||x|^-beta T_gamma v|_q / ||x|^alpha v|_p.
RatioRecord ddd_ratio(const RadialProfile& v, const DddParams& params);

/// ||x|^alpha u|_p / ||x|^(alpha+1) u'|_p. Throws domain for alpha p = -1 and
/// numerical when either norm is zero, infinite or truncated.
double hardy_step_ratio(const RadialProfile& u, double alpha, double p, int n);

/// Slope of log(ratio) against log(lambda) under u -> u(lambda x).
double predicted_slope(const CknParams& params);    // -n * scaling_residual
double predicted_slope(const TraceParams& params);  // -trace_scaling_residual
double predicted_slope(const DddParams& params);    // -n * ddd_scaling_residual

struct SlopeResult {
  double slope = 0.0;
  std::vector<double> lambdas;
  std::vector<RatioRecord> records;
  bool flagged = false;  // some record carries a flag
};

/// Least-squares slope over the dilates u(lambda x). Throws numerical when a
/// dilate escapes the grid, invalid_argument for fewer than two lambdas.
SlopeResult dilation_scan(const RadialProfile& u, const CknParams& params,
                          std::span<const double> lambdas);
SlopeResult dilation_scan(const HalfSpaceField& f, const TraceParams& params,
                          std::span<const double> lambdas);
SlopeResult dilation_scan(const RadialProfile& v, const DddParams& params,
                          std::span<const double> lambdas);

struct ScanOptions {
  bool require_admissible = true;  // refuse parameters outside the region
  bool check_refinement = true;    // recompute the sup on doubled grids
  int threads = 1;
};

struct FamilyScan {
  std::vector<RatioRecord> records;
  double sup = 0.0;
  double sup_refined = 0.0;       // 0 when refinement was not checked
  double refinement_change = 0.0;  // |sup_refined / sup - 1|
  bool stable = true;              // refinement_change < 1%
};

FamilyScan family_scan(std::span<const FamilySpec> specs, const CknParams& params,
                       const LogGrid& grid, const ScanOptions& opts = {});
FamilyScan family_scan(std::span<const FamilySpec> specs, const ZSpec& zprofile,
                       const TraceParams& params, const ProductGrid& grid,
                       const ScanOptions& opts = {});
FamilyScan family_scan(std::span<const FamilySpec> specs, const DddParams& params,
                       const LogGrid& grid, const ScanOptions& opts = {});

}  // namespace radineq
