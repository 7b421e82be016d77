#include "radineq/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "radineq/error.hpp"

namespace radineq::quad {

Estimate gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                       double rel_tol, unsigned max_depth) {
  Estimate e;
  double l1 = 0.0;
  e.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth,
                                                                          rel_tol, &e.error, &l1);
  return e;
}

Estimate tanh_sinh(const std::function<double(double)>& f, double a, double b,
                   double rel_tol) {
  // The integrator object caches abscissas; one per thread keeps calls reentrant.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  Estimate e;
  double l1 = 0.0;
  e.value = integrator.integrate(f, a, b, rel_tol, &e.error, &l1);
  return e;
}

namespace {

inline double int_pow(double x, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= x;
  return r;
}

}  // namespace

Estimate angular_integral(double eps2, double c, int m, double s, double rel_tol) {
  if (!(c > 0.0) || eps2 < 0.0 || m < 0) {
    fail(ErrorCode::invalid_argument, "angular integral: bad parameters");
  }
  const bool half_int = std::abs(2.0 * s - std::round(2.0 * s)) < 1e-15;
  const int two_s = static_cast<int>(std::round(2.0 * s));
  // sin^m d^{-s} = (sin / sqrt d)^m d^{-(s - m/2)}: the first factor stays O(1) and
  // the second has a small exponent, so neither underflows when d ~ eps2 is tiny.
  const int rest2 = two_s - m;
  const double rest = s - 0.5 * m;
  auto integrand = [=](double theta) {
    const double sh = std::sin(0.5 * theta);
    const double d = eps2 + c * sh * sh;
    const double sd = std::sqrt(d);
    double tail;
    if (half_int) {
      const int k = std::abs(rest2);
      tail = int_pow(d, k / 2);
      if (k % 2 == 1) tail *= sd;
      if (rest2 > 0) tail = 1.0 / tail;
    } else {
      tail = std::pow(d, -rest);
    }
    return int_pow(std::sin(theta) / sd, m) * tail;
  };

  constexpr double pi = std::numbers::pi;
  if (eps2 == 0.0) {
    if (!(m - 2.0 * s > -1.0)) fail(ErrorCode::domain, "angular integral diverges at theta = 0");
    // sin^m(theta) = 2^m sin^m(theta/2) cos^m(theta/2); keep the singular power in one
    // factor so nodes crowding theta = 0 never underflow the denominator.
    const double scale = std::pow(c, -s) * int_pow(2.0, m);
    const double power = m - 2.0 * s;
    auto reduced = [=](double theta) {
      return scale * int_pow(std::cos(0.5 * theta), m) * std::pow(std::sin(0.5 * theta), power);
    };
    return tanh_sinh(reduced, 0.0, pi, rel_tol);
  }

  // Each geometric panel keeps the integrand smooth on its own scale, so GK15 is
  // already converged there; deep bisection only chases the roundoff floor of the
  // error estimate on tiny panels.
  constexpr unsigned panel_depth = 3;
  const double width = 2.0 * std::sqrt(eps2 / c);
  Estimate total;
  double lo = 0.0;
  double hi = width;
  while (hi < 0.25 * pi) {
    const Estimate p = gauss_kronrod(integrand, lo, hi, rel_tol, panel_depth);
    total.value += p.value;
    total.error += p.error;
    lo = hi;
    hi *= 4.0;
  }
  const Estimate p = gauss_kronrod(integrand, lo, pi, rel_tol, panel_depth);
  total.value += p.value;
  total.error += p.error;
  return total;
}

}  // namespace radineq::quad
