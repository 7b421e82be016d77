#pragma once

// Angular kernels of the radial reductions.
//
// The trace kernel
//   I(a, z) = int_{-1}^{1} (1 - t^2)^{(n-3)/2} / (1 - 2 a t + a^2 + z^2)^{n/2} dt
// and the sphere-reduced Riesz kernel
//   K(rho, r) = int_{-1}^{1} (1 - t^2)^{(n-3)/2} (rho^2 - 2 rho r t + r^2)^{-gamma/2} dt
// are evaluated in the form t = cos(theta), which removes the endpoint weight,
// with the denominator written as (1 - a)^2 + z^2 + 4 a sin^2(theta/2) so the
// singular corner a = 1, z = 0 is resolved without cancellation.

#include <vector>

namespace radineq {

/// Surface area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
double unit_sphere_area(int d);

struct KernelEval {
  double a = 0.0;
  double z = 0.0;
  int n = 0;
  double value = 0.0;
  double est_error = 0.0;
};

/// Trace kernel by adaptive quadrature. Requires a > 0, z >= 0, n >= 2 and
/// (a, z) != (1, 0).
KernelEval kernel_I(double a, double z, int n);

/// Trace kernel at a = exp(log_a); accurate for a close to 1.
double kernel_I_log(double log_a, double z, int n);

/// Closed form for n = 3: 4 / (sqrt(A) sqrt(B) (sqrt(A) + sqrt(B))) with
/// A = (1-a)^2 + z^2, B = (1+a)^2 + z^2, equal to
/// (1/a) (A^{-1/2} - B^{-1/2}) without its cancellation at small a.
double kernel_I_closed_n3(double a, double z);

/// Sphere-reduced Riesz kernel; symmetric in (rho, r). Requires 0 < gamma < n,
/// n >= 2, and rho != r when gamma >= n - 1.
double sphere_kernel(double rho, double r, double gamma, int n);

/// sphere_kernel(exp(log_ratio), 1, gamma, n), accurate near log_ratio = 0.
double sphere_kernel_log(double log_ratio, double gamma, int n);

enum class AsymptoticRegime { small_a, large_r, singular };

struct AsymptoticFit {
  double exponent = 0.0;
  /// Largest deviation of log(kernel) from the fitted line.
  double residual = 0.0;
  std::vector<double> scales;
  std::vector<double> values;
};

/// Least-squares slope of log I against log(scale) over one decade, 16 samples:
///   small_a  : I(a -> 0, z) against 1 + z^2, expected -n/2
///   large_r  : I(r, 0) against r in [1e3, 1e4], expected -n
///   singular : I(1, z) against z in [1e-4, 1e-3], expected -1
/// Throws Error(numerical) when the residual exceeds 0.05.
AsymptoticFit kernel_asymptotic_fit(int n, AsymptoticRegime regime);

}  // namespace radineq
