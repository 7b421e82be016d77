#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "radineq/error.hpp"
#include "radineq/kernels.hpp"
#include "radineq/verify.hpp"

using namespace radineq;

namespace {

CknParams radial_example() { return {3, 2.0, 12.0, 12.0, 1.0, 0.0, 0.25, 0.25, 0.25}; }

// int_0^inf r^k e^{-c r^2} dr
double moment(double k, double c) { return std::tgamma(0.5 * (k + 1.0)) / (2.0 * std::pow(c, 0.5 * (k + 1.0))); }

RadialProfile gaussian(const LogGrid& g = LogGrid::default_radial()) {
  return make_radial({Family::gaussian, 1.0}, g);
}

// r * zbar_max has to reach the z decay at the smallest r
ProductGrid small_pgrid() { return ProductGrid(LogGrid(1e-3, 1e3, 1025), LogGrid(1e-4, 1e4, 193)); }

const std::vector<double> kLambdas{0.5, 0.8, 1.25, 2.0};

}  // namespace

TEST(CknRatio, ZeroFunctionIsFlagged) {
  auto u = gaussian();
  std::fill(u.u.begin(), u.u.end(), 0.0);
  std::fill(u.du.begin(), u.du.end(), 0.0);
  const auto rec = ckn_ratio(u, radial_example());
  EXPECT_TRUE(rec.flags.zero_over_zero);
  EXPECT_EQ(rec.lhs, 0.0);
  EXPECT_EQ(rec.rhs, 0.0);
  EXPECT_EQ(rec.ratio, 0.0);
}

TEST(CknRatio, DeterministicAndHomogeneous) {
  const auto u = gaussian();
  const auto a = ckn_ratio(u, radial_example());
  const auto b = ckn_ratio(u, radial_example());
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_TRUE(std::isfinite(a.ratio));
  EXPECT_GT(a.ratio, 0.0);
  EXPECT_FALSE(a.flags.any());

  CknParams half{3, 2.0, 2.0, 3.0, 0.5, 0.0, 0.0, 0.0, 0.0};
  auto twice = u;
  for (auto& x : twice.u) x *= 2.0;
  for (auto& x : twice.du) x *= 2.0;
  const auto r1 = ckn_ratio(u, half), r2 = ckn_ratio(twice, half);
  EXPECT_NEAR(r2.lhs / r1.lhs, 2.0, 1e-12);
  EXPECT_NEAR(r2.rhs / r1.rhs, 2.0, 1e-12);
  EXPECT_NEAR(r2.ratio / r1.ratio, 1.0, 1e-12);
}

TEST(CknRatio, GaussianMomentOracle) {
  // a = 1: |r^gamma e^{-r^2}|_r / |r^alpha 2r e^{-r^2}|_p in R^3
  const CknParams c = radial_example();
  const double w = unit_sphere_area(3);
  const double lhs = std::pow(w * moment(c.gamma * c.r + 2.0, c.r), 1.0 / c.r);
  const double rhs = std::pow(w * std::pow(2.0, c.p) * moment((c.alpha + 1.0) * c.p + 2.0, c.p), 1.0 / c.p);
  EXPECT_NEAR(ckn_ratio(gaussian(), c).ratio, lhs / rhs, 1e-9 * lhs / rhs);
}

TEST(HardyStep, GaussianValues) {
  const auto u = gaussian();
  EXPECT_NEAR(hardy_step_ratio(u, 0.0, 2.0, 1), 2.0 / std::sqrt(3.0), 1e-9);
  // n = 3, p = 2, alpha = 0
  const double top = moment(2.0, 2.0), bottom = 4.0 * moment(4.0 + 2.0, 2.0);
  EXPECT_NEAR(hardy_step_ratio(u, 0.0, 2.0, 3), std::sqrt(top / bottom), 1e-9);
  EXPECT_THROW(hardy_step_ratio(u, -0.5, 2.0, 3), Error);
  try {
    hardy_step_ratio(u, -1.0, 1.0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain);
  }
}

TEST(HardyStep, ConstantAlongDilations) {
  const auto u = gaussian();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(-0.2, 1.0), up(1.0, 4.0), ul(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const double alpha = ua(rng), p = up(rng);
    if (alpha * p + n <= 0.05) continue;
    const double base = hardy_step_ratio(u, alpha, p, n);
    const double lambda = std::exp(ul(rng));
    EXPECT_NEAR(hardy_step_ratio(dilate(u, lambda), alpha, p, n) / base, 1.0, 1e-8);
  }
}

TEST(DilationScan, CknSlopes) {
  const auto u = gaussian();
  const auto flat = dilation_scan(u, radial_example(), kLambdas);
  EXPECT_NEAR(flat.slope, 0.0, 1e-6);
  EXPECT_FALSE(flat.flagged);
  auto off = radial_example();
  off.gamma += 0.3;
  EXPECT_NEAR(predicted_slope(off), -0.3, 1e-14);
  EXPECT_NEAR(dilation_scan(u, off, kLambdas).slope, -0.3, 1e-3);
}

TEST(DilationScan, CknSlopeLawRandom) {
  const auto u = gaussian();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uw(-0.3, 1.0), up(1.2, 4.0), ua(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    CknParams c;
    c.n = 1 + static_cast<int>(rng() % 5);
    c.p = up(rng);
    c.q = up(rng);
    c.r = up(rng);
    c.a = ua(rng);
    c.alpha = uw(rng);
    c.beta = uw(rng);
    c.gamma = uw(rng);
    if (c.gamma * c.r + c.n <= 0.1 || c.beta * c.q + c.n <= 0.1 || (c.alpha + 1.0) * c.p + c.n <= 0.1) continue;
    const auto s = dilation_scan(u, c, kLambdas);
    EXPECT_NEAR(s.slope, predicted_slope(c), 1e-3) << k;
  }
}

TEST(TraceRatio, ZeroAndExample) {
  const auto pg = small_pgrid();
  auto f = make_halfspace({Family::gaussian, 1.0}, {ZProfile::gaussian, 1.0}, pg);
  const TraceParams t{3, 2.0, 3.0, 0.0, 0.0};
  const auto rec = trace_ratio(f, t);
  EXPECT_TRUE(std::isfinite(rec.ratio));
  EXPECT_GT(rec.ratio, 0.0);
  EXPECT_FALSE(rec.flags.any());
  std::fill(f.trace0.begin(), f.trace0.end(), 0.0);
  std::fill(f.grad_mag.begin(), f.grad_mag.end(), 0.0);
  EXPECT_TRUE(trace_ratio(f, t).flags.zero_over_zero);
}

TEST(TraceRatio, GaussianOracle) {
  // n = 1, alpha = beta = 0, p = q = 2: |e^{-x^2}|_2 / |grad e^{-r^2-z^2}|_2 over R x R+
  const auto pg = small_pgrid();
  const auto f = make_halfspace({Family::gaussian, 1.0}, {ZProfile::gaussian, 1.0}, pg);
  const double lhs = std::sqrt(2.0 * moment(0.0, 2.0));
  // |grad|^2 = 4 (r^2 + z^2) e^{-2r^2-2z^2}; two copies of the half line in y
  const double rhs = std::sqrt(2.0 * 4.0 * 2.0 * moment(2.0, 2.0) * moment(0.0, 2.0));
  EXPECT_NEAR(trace_ratio(f, {1, 2.0, 2.0, 0.0, 0.0}).ratio, lhs / rhs, 1e-8);
}

TEST(DilationScan, TraceSlopes) {
  const auto pg = small_pgrid();
  const auto f = make_halfspace({Family::gaussian, 1.0}, {ZProfile::exponential, 1.0}, pg);
  TraceParams t{3, 2.0, 3.0, 0.0, 0.0};
  EXPECT_NEAR(dilation_scan(f, t, kLambdas).slope, 0.0, 1e-6);
  t.beta = 0.2;
  EXPECT_NEAR(predicted_slope(t), 0.2, 1e-14);
  EXPECT_NEAR(dilation_scan(f, t, kLambdas).slope, 0.2, 1e-3);
}

TEST(DddRatio, ZeroExampleAndSlope) {
  const LogGrid g(1e-4, 1e4, 2049);
  const DddParams d{3, 2.0, 2.0, 0.5, 0.5, 2.0};
  auto v = gaussian(g);
  const auto rec = ddd_ratio(v, d);
  EXPECT_TRUE(std::isfinite(rec.ratio));
  EXPECT_GT(rec.ratio, 0.0);
  EXPECT_FALSE(rec.flags.any());
  EXPECT_EQ(ddd_ratio(v, d).ratio, rec.ratio);
  EXPECT_NEAR(dilation_scan(v, d, kLambdas).slope, 0.0, 1e-6);
  DddParams off = d;
  off.beta = 0.3;
  EXPECT_NEAR(dilation_scan(v, off, kLambdas).slope, predicted_slope(off), 1e-3);

  std::vector<double> zero(g.size(), 0.0);
  v.u = zero;
  v.du = zero;
  v.spec.scale = 1.0;
  // ddd_ratio reads samples, not the analytic family, for the norms
  const auto z = ddd_ratio(v, d);
  EXPECT_EQ(z.rhs, 0.0);
}

TEST(DilationScan, RejectsBadInput) {
  const auto u = gaussian(LogGrid(1e-2, 1e2, 257));
  EXPECT_THROW(dilation_scan(u, radial_example(), std::vector<double>{1.0}), Error);
  EXPECT_THROW(dilation_scan(u, radial_example(), std::vector<double>{1.0, -2.0}), Error);
  EXPECT_THROW(dilation_scan(u, radial_example(), std::vector<double>{1.0, 1e4}), Error);
}

TEST(FamilyScan, DilationSubfamilyCollapses) {
  const std::vector<FamilySpec> specs{{Family::gaussian, 0.5}, {Family::gaussian, 1.0}, {Family::gaussian, 2.0}};
  const auto s = family_scan(specs, radial_example(), LogGrid::default_radial());
  ASSERT_EQ(s.records.size(), 3u);
  for (const auto& r : s.records) EXPECT_NEAR(r.ratio / s.sup, 1.0, 1e-6);
  EXPECT_TRUE(s.stable);
}

TEST(FamilyScan, BundledFamiliesStable) {
  const std::vector<FamilySpec> specs{{Family::gaussian, 1.0},
                                      {Family::bump, 1.0},
                                      {Family::bump, 1.0, 0.0, 0.3},
                                      {Family::power_tail, 1.0, 4.0}};
  ScanOptions opts;
  opts.threads = 2;
  const auto s = family_scan(specs, radial_example(), LogGrid::default_radial(), opts);
  EXPECT_TRUE(std::isfinite(s.sup));
  EXPECT_GT(s.sup, 0.0);
  EXPECT_TRUE(s.stable) << s.refinement_change;
  ScanOptions serial;
  serial.threads = 1;
  const auto s1 = family_scan(specs, radial_example(), LogGrid::default_radial(), serial);
  for (std::size_t i = 0; i < specs.size(); ++i) EXPECT_EQ(s.records[i].ratio, s1.records[i].ratio);
}

TEST(FamilyScan, RefusesInadmissibleUnlessAllowed) {
  const std::vector<FamilySpec> specs{{Family::gaussian, 1.0}};
  CknParams bad = radial_example();
  bad.gamma += 0.3;
  EXPECT_THROW(family_scan(specs, bad, LogGrid(1e-3, 1e3, 513)), Error);
  ScanOptions loose;
  loose.require_admissible = false;
  loose.check_refinement = false;
  EXPECT_NO_THROW(family_scan(specs, bad, LogGrid(1e-3, 1e3, 513), loose));
  try {
    family_scan(std::span<const FamilySpec>{}, radial_example(), LogGrid(1e-3, 1e3, 513));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "nothing to scan");
  }
}

TEST(FamilyScan, TraceAndDdd) {
  const std::vector<FamilySpec> specs{{Family::gaussian, 1.0}, {Family::bump, 1.5}};
  ScanOptions opts;
  opts.check_refinement = false;
  const auto t = family_scan(specs, {ZProfile::gaussian, 1.0}, TraceParams{3, 2.0, 3.0, 0.0, 0.0},
                             small_pgrid(), opts);
  EXPECT_EQ(t.records.size(), 2u);
  EXPECT_GT(t.sup, 0.0);
  const auto d = family_scan(specs, DddParams{3, 2.0, 2.0, 0.5, 0.5, 2.0}, LogGrid(1e-4, 1e4, 1025), opts);
  EXPECT_EQ(d.records.size(), 2u);
  EXPECT_GT(d.sup, 0.0);
}
