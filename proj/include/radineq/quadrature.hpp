#pragma once

// Thin wrappers over Boost.Math quadrature used by the kernel and operator code.

#include <functional>

namespace radineq::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]; max_depth bounds the bisection
/// tree, so at most 2^max_depth subintervals are used.
Estimate gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                       double rel_tol = 1e-11, unsigned max_depth = 14);

/// Double-exponential rule; handles integrable endpoint singularities and
/// half-infinite ranges (b may be +infinity).
Estimate tanh_sinh(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-10);

/// Angular integral int_0^pi sin^m(theta) / (eps2 + c sin^2(theta/2))^s dtheta.
/// The integrand peaks at theta = 0 with width ~ 2 sqrt(eps2 / c); panels are
/// placed geometrically away from the peak. eps2 == 0 is allowed when the
/// endpoint singularity is integrable (m - 2s > -1).
Estimate angular_integral(double eps2, double c, int m, double s, double rel_tol = 1e-11);

}  // namespace radineq::quad
