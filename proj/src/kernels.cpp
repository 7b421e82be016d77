#include "radineq/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "radineq/error.hpp"
#include "radineq/quadrature.hpp"

namespace radineq {
namespace {

void require_trace_dimension(int n) {
  if (n < 2) fail(ErrorCode::domain, "use n=1 direct kernel");
}

void require_riesz(double gamma, int n) {
  if (n < 2) fail(ErrorCode::domain, "sphere kernel needs n >= 2");
  if (!(gamma > 0.0 && gamma < n)) fail(ErrorCode::domain, "Riesz exponent out of range");
}

}  // namespace

double unit_sphere_area(int d) {
  if (d < 1) fail(ErrorCode::invalid_argument, "sphere dimension must be >= 1");
  const double half = 0.5 * d;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

KernelEval kernel_I(double a, double z, int n) {
  require_trace_dimension(n);
  if (!(a > 0.0) || !(z >= 0.0)) fail(ErrorCode::invalid_argument, "kernel needs a > 0, z >= 0");
  if (a == 1.0 && z == 0.0) fail(ErrorCode::domain, "kernel singular point");
  const double d = 1.0 - a;
  const auto est = quad::angular_integral(d * d + z * z, 4.0 * a, n - 2, 0.5 * n);
  return {a, z, n, est.value, est.error};
}

double kernel_I_log(double log_a, double z, int n) {
  require_trace_dimension(n);
  if (log_a == 0.0 && z == 0.0) fail(ErrorCode::domain, "kernel singular point");
  const double d = std::expm1(log_a);
  if (n == 3) {
    const double sa = std::sqrt(d * d + z * z);
    const double sb = std::sqrt((2.0 + d) * (2.0 + d) + z * z);
    return 4.0 / (sa * sb * (sa + sb));
  }
  return quad::angular_integral(d * d + z * z, 4.0 * std::exp(log_a), n - 2, 0.5 * n).value;
}

double kernel_I_closed_n3(double a, double z) {
  if (!(a > 0.0) || !(z >= 0.0)) fail(ErrorCode::invalid_argument, "kernel needs a > 0, z >= 0");
  if (a == 1.0 && z == 0.0) fail(ErrorCode::domain, "kernel singular point");
  const double sa = std::sqrt((1.0 - a) * (1.0 - a) + z * z);
  const double sb = std::sqrt((1.0 + a) * (1.0 + a) + z * z);
  return 4.0 / (sa * sb * (sa + sb));
}

double sphere_kernel(double rho, double r, double gamma, int n) {
  require_riesz(gamma, n);
  if (!(rho > 0.0) || !(r > 0.0)) fail(ErrorCode::invalid_argument, "radii must be > 0");
  const double d = rho - r;
  if (d == 0.0 && gamma >= n - 1.0) fail(ErrorCode::domain, "sphere kernel diverges at rho == r");
  return quad::angular_integral(d * d, 4.0 * rho * r, n - 2, 0.5 * gamma).value;
}

double sphere_kernel_log(double log_ratio, double gamma, int n) {
  require_riesz(gamma, n);
  const double d = std::expm1(log_ratio);
  if (d == 0.0 && gamma >= n - 1.0) fail(ErrorCode::domain, "sphere kernel diverges at rho == r");
  return quad::angular_integral(d * d, 4.0 * std::exp(log_ratio), n - 2, 0.5 * gamma).value;
}

AsymptoticFit kernel_asymptotic_fit(int n, AsymptoticRegime regime) {
  require_trace_dimension(n);
  constexpr int samples = 16;
  AsymptoticFit fit;
  std::vector<double> lx;
  std::vector<double> ly;
  for (int i = 0; i < samples; ++i) {
    const double frac = static_cast<double>(i) / (samples - 1);
    double scale = 0.0;
    double value = 0.0;
    switch (regime) {
      case AsymptoticRegime::small_a: {
        scale = std::pow(10.0, frac);  // 1 + z^2 over [1, 10]
        value = kernel_I(1e-9, std::sqrt(scale - 1.0), n).value;
        break;
      }
      case AsymptoticRegime::large_r: {
        scale = 1e3 * std::pow(10.0, frac);
        value = kernel_I(scale, 0.0, n).value;
        break;
      }
      case AsymptoticRegime::singular: {
        scale = 1e-4 * std::pow(10.0, frac);
        value = kernel_I(1.0, scale, n).value;
        break;
      }
    }
    fit.scales.push_back(scale);
    fit.values.push_back(value);
    lx.push_back(std::log(scale));
    ly.push_back(std::log(value));
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < samples; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= samples;
  my /= samples;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < samples; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  fit.exponent = sxy / sxx;
  for (int i = 0; i < samples; ++i) {
    const double pred = my + fit.exponent * (lx[i] - mx);
    fit.residual = std::max(fit.residual, std::abs(ly[i] - pred));
  }
  if (fit.residual > 0.05) {
    std::ostringstream msg;
    msg << "asymptotic regime not reached: n=" << n << " slope=" << fit.exponent
        << " residual=" << fit.residual;
    fail(ErrorCode::numerical, msg.str());
  }
  return fit;
}

}  // namespace radineq
