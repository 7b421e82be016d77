#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "radineq/error.hpp"
#include "radineq/kernels.hpp"
#include "radineq/operators.hpp"

using namespace radineq;

namespace {

constexpr double pi = std::numbers::pi;

// Coarser than the default grids with a comparable log step, to keep tests quick.
LogGrid test_rgrid() { return LogGrid(1e-4, 1e4, 2049); }
ProductGrid trace_grid() { return ProductGrid(LogGrid(1e-4, 1e4, 1025), LogGrid(1e-4, 1e4, 193)); }

double interp(const OperatorResult& r, double rho) { return interpolate_log(r.values, r.grid, rho); }

}  // namespace

TEST(Norms, RadialExamples) {
  const auto g = LogGrid::default_radial();
  const auto gauss = make_radial({Family::gaussian, 1.0}, g);
  EXPECT_NEAR(weighted_norm_radial(gauss, 0.0, 2.0, 3).value, std::pow(pi / 2.0, 0.75), 1e-9);
  EXPECT_NEAR(weighted_norm_radial(dilate(gauss, 2.0), 0.0, 2.0, 3).value,
              std::pow(2.0, -1.5) * std::pow(pi / 2.0, 0.75), 1e-9);
  // sharp plateau bump ~ indicator of the unit ball
  const auto ball = make_radial({Family::bump, 1.0, 0.0, 0.01}, g);
  EXPECT_NEAR(weighted_norm_radial(ball, 0.0, 1.0, 3).value, 4.0 * pi / 3.0, 0.02 * 4.0 * pi / 3.0);
  EXPECT_THROW(weighted_norm_radial(gauss, 0.0, 0.5, 3), Error);
}

TEST(Norms, WeightedGaussianMoments) {
  // || |x|^w e^{-|x|^2} ||_p^p = omega_{n-1} Gamma((wp+n)/2) / (2 p^{(wp+n)/2})
  const auto g = LogGrid::default_radial();
  const auto gauss = make_radial({Family::gaussian, 1.0}, g);
  for (int n : {1, 2, 3, 5}) {
    for (double w : {-0.3, 0.0, 1.5}) {
      for (double p : {1.0, 2.0, 7.5}) {
        const double s = 0.5 * (w * p + n);
        if (s <= 0.0) continue;
        const double exact = std::pow(unit_sphere_area(n) * std::tgamma(s) / (2.0 * std::pow(p, s)), 1.0 / p);
        const auto r = weighted_norm_radial(gauss, w, p, n);
        EXPECT_NEAR(r.value / exact, 1.0, 1e-9);
        EXPECT_FALSE(r.truncated);
      }
    }
  }
}

TEST(Norms, NonIntegrableWeightIsFlagged) {
  const auto g = LogGrid(1e-5, 1e5, 1025);
  const auto gauss = make_radial({Family::gaussian, 1.0}, g);
  EXPECT_TRUE(weighted_norm_radial(gauss, -2.0, 2.0, 3).truncated);
}

TEST(Norms, HalfSpaceGaussian) {
  // r * zbar_max must reach the z decay at the smallest r
  const ProductGrid small(LogGrid(1e-3, 1e3, 1025), LogGrid(1e-4, 1e4, 193));
  const auto f = make_halfspace({Family::gaussian, 1.0}, {ZProfile::gaussian, 1.0}, small);
  EXPECT_NEAR(weighted_norm_halfspace(f.f, small, 0.0, 2.0, 1).value, std::sqrt(pi / 4.0), 1e-8);
  // n = 3: 4 pi int r^2 e^{-2r^2} dr * int e^{-2z^2} dz = (pi/2)^{3/2} * sqrt(pi/8)
  EXPECT_NEAR(weighted_norm_halfspace(f.f, small, 0.0, 2.0, 3).value,
              std::sqrt(std::pow(pi / 2.0, 1.5) * std::sqrt(pi / 8.0)), 1e-8);
}

TEST(Norms, HalfSpaceScaling) {
  // alpha p + n + 1 = 1 for n = 1, alpha = -0.4: the r -> 0 end carries a slow r log r tail
  const ProductGrid pg(LogGrid(1e-6, 1e3, 1153), LogGrid(1e-4, 1e8, 289));
  const auto f = make_halfspace({Family::gaussian, 1.0}, {ZProfile::exponential, 0.5}, pg);
  const auto d = dilate(f, 1.8);
  for (int n : {1, 3}) {
    for (double alpha : {-0.4, 0.0, 0.7}) {
      const double p = 2.5;
      const double a = weighted_norm_halfspace(f.f, pg, alpha, p, n).value;
      const double b = weighted_norm_halfspace(d.f, pg, alpha, p, n).value;
      EXPECT_NEAR(b / a, std::pow(1.8, -alpha - (n + 1.0) / p), 1e-6);
    }
  }
}

TEST(Norms, HalfSpaceNonIntegrable) {
  const ProductGrid pg(LogGrid(1e-5, 1e5, 513), LogGrid(1e-4, 1e4, 97));
  const auto f = make_halfspace({Family::gaussian, 1.0}, {ZProfile::gaussian, 1.0}, pg);
  EXPECT_TRUE(weighted_norm_halfspace(f.f, pg, -3.0, 1.0, 1).truncated);
}

TEST(Riesz, NewtonBall) {
  const auto g = LogGrid::default_radial();
  double prev_err = INFINITY;
  for (double w : {0.1, 0.05, 0.02}) {
    // plateau up to 1 - w, so the ball radius is about 1 - w/2
    const auto v = make_radial({Family::bump, 1.0 + 0.5 * w, 0.0, w / (1.0 + 0.5 * w)}, g);
    const auto t = riesz_radial(v, 1.0, 3);
    const double at2 = interp(t, 2.0);
    const double err = std::abs(at2 - 2.0 * pi / 3.0) / (2.0 * pi / 3.0);
    EXPECT_LT(err, 0.01);
    EXPECT_LT(err, prev_err);
    prev_err = err;
    EXPECT_NEAR(t.values.front(), 2.0 * pi, 0.01 * 2.0 * pi);
  }
}

TEST(Riesz, GaussianClosedForm) {
  // n = 3, gamma = 1: T e^{-r^2}(rho) = pi^{3/2} erf(rho) / rho
  const auto g = test_rgrid();
  const auto v = make_radial({Family::gaussian, 1.0}, g);
  const auto t = riesz_radial(v, 1.0, 3);
  for (std::size_t i = 0; i < g.size(); i += 50) {
    const double rho = g.node(i);
    const double exact = std::pow(pi, 1.5) * std::erf(rho) / rho;
    EXPECT_NEAR(t.values[i] / exact, 1.0, 1e-8) << rho;
  }
}

TEST(Riesz, LinearityAndHomogeneity) {
  const auto g = test_rgrid();
  const auto a = make_radial({Family::gaussian, 1.0}, g);
  const auto b = make_radial({Family::bump, 2.0}, g);
  for (int n : {2, 3, 5}) {
    const double gamma = n - 0.5;
    std::vector<double> comb(g.size());
    for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = 2.0 * a.u[i] - 3.0 * b.u[i];
    const auto tc = riesz_radial(comb, g, gamma, n);
    const auto ta = riesz_radial(a, gamma, n);
    const auto tb = riesz_radial(b, gamma, n);
    double peak = 0.0;
    for (double x : tc.values) peak = std::max(peak, std::abs(x));
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(tc.values[i], 2.0 * ta.values[i] - 3.0 * tb.values[i], 1e-10 * peak);
    }
    // T v_lambda(rho) = lambda^{gamma - n} T v(lambda rho); lambda = e^{kh} keeps nodes aligned
    const int k = 40;
    const double lambda = std::exp(k * g.step());
    const auto td = riesz_radial(dilate(a, lambda), gamma, n);
    for (std::size_t i = 300; i + k + 300 < g.size(); i += 25) {
      const double expect = std::pow(lambda, gamma - n) * ta.values[i + k];
      EXPECT_NEAR(td.values[i] / expect, 1.0, 1e-6);
    }
  }
}

TEST(Riesz, Errors) {
  const auto g = LogGrid(1e-2, 1e2, 129);
  const auto v = make_radial({Family::gaussian, 1.0}, g);
  EXPECT_THROW(riesz_radial(v, 3.0, 3), Error);
  EXPECT_THROW(riesz_radial(v, 0.0, 3), Error);
  EXPECT_THROW(riesz_radial(v, 0.5, 1), Error);
}

TEST(Representation, GaussianAndZero) {
  const auto g = LogGrid::default_radial();
  for (int n : {2, 3, 5}) {
    const auto u = make_radial({Family::gaussian, 1.0}, g);
    const auto b = representation_bound(u, n);
    EXPECT_GE(representation_margin(u, b, n).min_margin, -1e-6) << n;
    // equality at the origin for radially decreasing profiles
    EXPECT_NEAR(b.values.front() / unit_sphere_area(n), 1.0, 1e-6);
  }
  const std::vector<double> zero(g.size(), 0.0);
  const auto b0 = riesz_radial(zero, g, 2.0, 3);
  for (double x : b0.values) EXPECT_EQ(x, 0.0);
  EXPECT_FALSE(b0.report.truncated);
}

TEST(Trace, DirectUnitSquare) {
  auto ind = [](double r, double z) { return (r <= 1.0 && z <= 1.0) ? 1.0 : 0.0; };
  EXPECT_NEAR(trace_apply_direct(ind, 0.0, 1, 1.0, 1.0), 4.0 * std::log(1.0 + std::sqrt(2.0)), 1e-8);
  // far field: T f(x) x -> area 2
  const double x = 1e4;
  EXPECT_NEAR(trace_apply_direct(ind, x, 1, 1.0, 1.0) * x, 2.0, 1e-3);
}

TEST(Trace, DirectGaussianOrigin) {
  // n = 3, x = 0: omega_2 int int e^{-r^2 - z^2} r^2 (r^2 + z^2)^{-3/2} dr dz
  //             = 4 pi int_0^{pi/2} cos^2 t dt int e^{-R^2} dR = 4 pi (pi/4)(sqrt(pi)/2)
  auto f = [](double r, double z) { return std::exp(-r * r - z * z); };
  EXPECT_NEAR(trace_apply_direct(f, 0.0, 3), pi * pi * std::sqrt(pi) / 2.0, 1e-8);
}

TEST(Trace, ConvolutionMatchesDirect) {
  const auto pg = trace_grid();
  for (int n : {1, 2, 3, 5}) {
    const auto f = make_halfspace({Family::gaussian, 1.0}, {ZProfile::gaussian, 1.0}, pg);
    const auto t = trace_apply(f, n);
    EXPECT_FALSE(t.report.truncated);
    std::vector<double> rhos;
    for (int k = 0; k < 8; ++k) rhos.push_back(0.05 * std::pow(60.0, k / 7.0));
    const auto d = trace_apply_direct(f, n, rhos);
    double peak = 0.0;
    for (double x : t.values) peak = std::max(peak, std::abs(x));
    for (std::size_t k = 0; k < rhos.size(); ++k) {
      EXPECT_NEAR(interp(t, rhos[k]), d[k], 1e-5 * peak) << "n=" << n << " rho=" << rhos[k];
    }
  }
}

TEST(Trace, PositivityAndScaling) {
  const auto pg = trace_grid();
  const auto f = make_halfspace({Family::bump, 1.5}, {ZProfile::exponential, 1.0}, pg);
  const int k = 20;
  const double lambda = std::exp(k * pg.rgrid.step());
  const auto d = dilate(f, lambda);
  for (int n : {2, 3}) {
    const auto t = trace_apply(f, n);
    for (double x : t.values) EXPECT_GE(x, 0.0);
    const auto td = trace_apply(d, n);
    // T f_lambda(rho) = lambda^{-1} T f(lambda rho)
    for (std::size_t i = 200; i + k + 200 < pg.rgrid.size(); i += 20) {
      EXPECT_NEAR(td.values[i] * lambda / t.values[i + k], 1.0, 1e-6);
    }
  }
}

TEST(Trace, DirectPowerTailHighDimension) {
  // slow tails reach polar radii where r^{n-1} alone overflows
  const auto pg = trace_grid();
  const auto f = make_halfspace({Family::power_tail, 1.0, 4.0}, {ZProfile::gaussian, 1.0}, pg);
  const auto t = trace_apply(f, 5);
  const std::vector<double> rhos{0.5};
  const auto d = trace_apply_direct(f, 5, rhos);
  ASSERT_TRUE(std::isfinite(d[0]));
  double peak = 0.0;
  for (double x : t.values) peak = std::max(peak, std::abs(x));
  EXPECT_NEAR(interp(t, 0.5), d[0], 1e-5 * peak);
}
