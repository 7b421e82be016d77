#pragma once

// Weighted norms and the radial operators: the Riesz potential
//   T_gamma v(x) = int_{R^n} v(y) |x - y|^{-gamma} dy
// and the half-space trace operator
//   T f(x) = int_{R^n x R+} f(y, z) / (|x - y|^2 + z^2)^{n/2} dy dz.
// Both are evaluated at |x| = rho on a log grid as multiplicative convolutions,
// with product integration around the diagonal rho = r.

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "radineq/fields.hpp"
#include "radineq/grids.hpp"

namespace radineq {

struct NormResult {
  double value = 0.0;
  /// The integrand does not decay at a grid end or its tail fit is unreliable.
  bool truncated = false;
};

/// || |x|^w u ||_{L^p(R^n)} = (omega_{n-1} int |u|^p rho^{wp+n} drho/rho)^{1/p}.
NormResult weighted_norm_radial(std::span<const double> u, const LogGrid& grid, double w,
                                double p, int n);
NormResult weighted_norm_radial(const RadialProfile& u, double w, double p, int n);

/// || |(y,z)|^alpha g ||_{L^p(R^n x R+)} for g sampled on the (r, zbar) grid.
NormResult weighted_norm_halfspace(std::span<const double> g, const ProductGrid& pgrid,
                                   double alpha, double p, int n);

enum class Method { convolution, direct };

struct TruncationReport {
  bool truncated = false;
  /// Largest share of the value carried by the zbar range below the first node
  /// and the first zbar cell (trace operator only).
  double corner_fraction = 0.0;
  bool corner_flagged = false;
};

struct OperatorResult {
  LogGrid grid;
  std::vector<double> values;
  Method method = Method::convolution;
  TruncationReport report;
};

/// T_gamma v on the grid of v, 0 < gamma < n, n >= 2.
OperatorResult riesz_radial(std::span<const double> v, const LogGrid& grid, double gamma, int n);
OperatorResult riesz_radial(const RadialProfile& v, double gamma, int n);

/// T_{n-1}(|u'|); |u| <= T_{n-1}(|u'|) / omega_{n-1} pointwise.
OperatorResult representation_bound(const RadialProfile& u, int n);

struct RepresentationMargin {
  /// min over nodes of T/omega_{n-1} - |u|, divided by max |u|.
  double min_margin = 0.0;
  std::size_t worst_node = 0;
};

RepresentationMargin representation_margin(const RadialProfile& u, const OperatorResult& bound,
                                           int n);

/// T f at every radial node by convolution per zbar node followed by the zbar
/// integral. n == 1 uses the group R \ {0}.
OperatorResult trace_apply(const HalfSpaceField& f, int n);

/// Direct quadrature of T f(x) at |x| = rho for f(r, z) given as a callable, f
/// vanishing outside r <= rbox, z <= zbox (infinite boxes allowed). For n == 1 the
/// y integral runs over R with f(|y|, z).
double trace_apply_direct(const std::function<double(double, double)>& f, double rho, int n,
                          double rbox = std::numeric_limits<double>::infinity(),
                          double zbox = std::numeric_limits<double>::infinity());

/// Direct route at the given radii for a field's analytic representation.
std::vector<double> trace_apply_direct(const HalfSpaceField& f, int n,
                                       std::span<const double> rhos);

}  // namespace radineq
