#include "radineq/grids.hpp"

#include <algorithm>
#include <cmath>

#include "radineq/error.hpp"

namespace radineq {
namespace {

constexpr double kBoundaryFraction = 1e-8;
constexpr double kExtrapolationFraction = 1e-4;
// Slowest power law accepted for tail completion.
constexpr double kMinTailExponent = 0.05;

struct EndTail {
  double value = 0.0;
  double uncertainty = 0.0;
  bool decays = true;
};

// g0 is the outermost sample, g1 and g2 step inward. The integrand beyond the end
// is modelled as g0 * exp(-k * s) in the outward log distance s. With the trapezoid
// rule the value also carries the endpoint Euler-Maclaurin term of that model.
EndTail end_tail(double g0, double g1, double g2, double h, bool trapezoid) {
  EndTail t;
  if (g0 == 0.0) return t;
  if (g1 == 0.0 || (g0 > 0) != (g1 > 0)) {
    t.decays = false;
    return t;
  }
  const double k01 = std::log(g1 / g0) / h;
  if (!(k01 >= kMinTailExponent)) {
    t.decays = false;
    return t;
  }
  t.value = g0 / k01;
  if (trapezoid) t.value += g0 * k01 * h * h / 12.0;
  if (g2 != 0.0 && (g1 > 0) == (g2 > 0)) {
    const double k12 = std::log(g2 / g1) / h;
    if (k12 >= kMinTailExponent) {
      t.uncertainty = std::abs(g0 / k12 - g0 / k01);
    } else {
      t.uncertainty = std::abs(t.value);
    }
  }
  return t;
}

}  // namespace

LogGrid::LogGrid(double rmin, double rmax, std::size_t n, QuadratureRule rule)
    : rmin_(rmin), rmax_(rmax), h_(0.0), rule_(rule) {
  if (!(rmin > 0.0)) fail(ErrorCode::invalid_argument, "grid rmin must be > 0");
  if (!(rmax > rmin)) fail(ErrorCode::invalid_argument, "grid rmax must be > rmin");
  if (n < 8) fail(ErrorCode::invalid_argument, "grid needs at least 8 nodes");
  if (rule == QuadratureRule::simpson && n % 2 == 0) {
    fail(ErrorCode::invalid_argument, "simpson rule needs an odd node count");
  }
  const double lo = std::log(rmin);
  h_ = (std::log(rmax) - lo) / static_cast<double>(n - 1);
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = std::exp(lo + static_cast<double>(i) * h_);
  nodes_.front() = rmin;
  nodes_.back() = rmax;

  weights_.assign(n, h_);
  if (rule == QuadratureRule::trapezoid) {
    weights_.front() = weights_.back() = 0.5 * h_;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      weights_[i] = c * h_ / 3.0;
    }
  }
}

double LogGrid::log_node(std::size_t i) const {
  return std::log(rmin_) + static_cast<double>(i) * h_;
}

LogGrid LogGrid::shifted(std::ptrdiff_t k) const {
  const double f = std::exp(static_cast<double>(k) * h_);
  return LogGrid(rmin_ * f, rmax_ * f, size(), rule_);
}

LogGrid LogGrid::refined() const { return LogGrid(rmin_, rmax_, 2 * size() - 1, rule_); }

bool LogGrid::same_as(const LogGrid& o) const noexcept {
  return size() == o.size() && rule_ == o.rule_ &&
         std::abs(std::log(rmin_ / o.rmin_)) < 1e-12 &&
         std::abs(std::log(rmax_ / o.rmax_)) < 1e-12;
}

double haar_integral(std::span<const double> samples, const LogGrid& grid) {
  if (samples.size() != grid.size()) {
    fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  }
  const auto w = grid.haar_weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sum += w[i] * samples[i];
  return sum;
}

IntegralResult haar_integral_with_tails(std::span<const double> g, const LogGrid& grid) {
  IntegralResult res;
  res.value = haar_integral(g, grid);
  const std::size_t n = g.size();
  const double h = grid.step();
  const bool trap = grid.rule() == QuadratureRule::trapezoid;
  const EndTail left = end_tail(g[0], g[1], g[2], h, trap);
  const EndTail right = end_tail(g[n - 1], g[n - 2], g[n - 3], h, trap);
  res.tail = left.value + right.value;
  res.value += res.tail;

  const double scale = std::abs(res.value);
  if (!left.decays && std::abs(g[0]) > kBoundaryFraction * scale) res.truncated = true;
  if (!right.decays && std::abs(g[n - 1]) > kBoundaryFraction * scale) res.truncated = true;
  if (left.uncertainty + right.uncertainty > kExtrapolationFraction * scale && scale > 0.0) {
    res.truncated = true;
  }
  return res;
}

IntegralResult radial_measure_integral(std::span<const double> samples, const LogGrid& grid,
                                       double exponent) {
  if (samples.size() != grid.size()) {
    fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  }
  std::vector<double> g(samples.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = samples[i] == 0.0 ? 0.0 : samples[i] * std::pow(grid.node(i), exponent);
  }
  return haar_integral_with_tails(g, grid);
}

IntegralResult zbar_integral(std::span<const double> samples, const LogGrid& zgrid) {
  if (samples.size() != zgrid.size()) {
    fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  }
  const std::size_t n = samples.size();
  const double h = zgrid.step();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = samples[i] * zgrid.node(i);
  IntegralResult res;
  res.value = haar_integral(g, zgrid);

  // Near zbar = 0 the trace integrands approach A + B log(zbar); the model is fitted
  // on the first two nodes and checked against the next pair.
  auto log_affine_tail = [&](std::size_t i0) {
    const double z0 = zgrid.node(i0), z1 = zgrid.node(i0 + 1);
    const double b = (samples[i0 + 1] - samples[i0]) / (std::log(z1) - std::log(z0));
    const double a = samples[i0] - b * std::log(z0);
    const double z = zgrid.node(0);
    return z * (a + b * (std::log(z) - 1.0));
  };
  const double b01 = (samples[1] - samples[0]) / h;
  double left = log_affine_tail(0);
  const double left_alt = log_affine_tail(1);
  if (zgrid.rule() == QuadratureRule::trapezoid) {
    left += h * h / 12.0 * (g[0] + zgrid.node(0) * b01);
  }
  const EndTail right = end_tail(g[n - 1], g[n - 2], g[n - 3], h,
                                 zgrid.rule() == QuadratureRule::trapezoid);
  res.tail = left + right.value;
  res.value += res.tail;
  const double scale = std::abs(res.value);
  if (!right.decays && std::abs(g[n - 1]) > kBoundaryFraction * scale) res.truncated = true;
  if (std::abs(left - left_alt) + right.uncertainty > kExtrapolationFraction * scale &&
      scale > 0.0) {
    res.truncated = true;
  }
  return res;
}

double interpolate_log(std::span<const double> samples, const LogGrid& grid, double rho) {
  if (samples.size() != grid.size()) {
    fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  }
  if (!(rho > 0.0)) return 0.0;
  const double t = (std::log(rho) - std::log(grid.rmin())) / grid.step();
  const double last = static_cast<double>(grid.size() - 1);
  constexpr double slack = 1e-9;
  if (t < -slack || t > last + slack) return 0.0;
  const double tc = std::clamp(t, 0.0, last);
  auto base = static_cast<std::ptrdiff_t>(std::floor(tc)) - 1;
  base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(grid.size()) - 4);
  const double s = tc - static_cast<double>(base);  // nodes sit at s = 0, 1, 2, 3
  double out = 0.0;
  for (int k = 0; k < 4; ++k) {
    double l = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m != k) l *= (s - m) / static_cast<double>(k - m);
    }
    out += l * samples[static_cast<std::size_t>(base + k)];
  }
  return out;
}

}  // namespace radineq
