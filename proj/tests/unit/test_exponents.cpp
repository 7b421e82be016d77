#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "radineq/error.hpp"
#include "radineq/exponents.hpp"

using namespace radineq;

namespace {

CknParams radial_example() {
  // a = 1, so sigma = gamma
  return CknParams{3, 2.0, 12.0, 12.0, 1.0, 0.0, 0.25, 0.25, 0.25};
}

}  // namespace

TEST(DeriveSigma, Examples) {
  EXPECT_DOUBLE_EQ(derive_sigma(1.0, 0.25, 7.0), 0.25);
  EXPECT_DOUBLE_EQ(derive_sigma(0.5, 1.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(derive_sigma(0.25, 0.5, -1.0), 5.0);
}

TEST(DeriveSigma, ZeroWeightRejected) {
  try {
    derive_sigma(0.0, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain);
    EXPECT_STREQ(e.what(), "sigma undetermined at a=0");
  }
}

TEST(DeriveSigma, RoundTripProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(1e-3, 1.0), uw(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = ua(rng), gamma = uw(rng), beta = uw(rng);
    const auto c = CknParams::with_derived_sigma(3, 2.0, 2.0, 2.0, a, 0.0, beta, gamma);
    EXPECT_NEAR(a * c.sigma + (1.0 - a) * c.beta, gamma, 1e-12 * (1.0 + std::abs(gamma) / a));
    EXPECT_NEAR(derive_sigma(a, c.gamma, c.beta), c.sigma, 1e-12 * (1.0 + std::abs(c.sigma)));
  }
}

TEST(ScalingResidual, Examples) {
  CknParams c{3, 2.0, 5.0, 12.0, 1.0, 0.0, 3.0, 0.25, 0.25};
  EXPECT_NEAR(scaling_residual(c), 0.0, 1e-15);
  CknParams d{3, 2.0, 4.0, 4.0, 1.0, 0.0, -0.25, -0.25, -0.25};
  EXPECT_NEAR(scaling_residual(d), 0.0, 1e-15);
  c.gamma += 0.3;
  EXPECT_NEAR(scaling_residual(c), 0.1, 1e-15);
}

TEST(CknClassical, Examples) {
  CknParams ok{3, 2.0, 4.0, 4.0, 1.0, 0.0, -0.25, -0.25, -0.25};
  EXPECT_TRUE(check_ckn_classical(ok).verdict);

  const auto bad = check_ckn_classical(radial_example());
  EXPECT_FALSE(bad.verdict);
  ASSERT_EQ(bad.failing().size(), 1u);
  EXPECT_EQ(bad.failing()[0], "alpha-sigma>=0");
  EXPECT_NEAR(bad.find("alpha-sigma>=0")->residual, -0.25, 1e-15);
}

TEST(CknClassical, VacuousAtZeroWeight) {
  CknParams c{3, 2.0, 2.0, 2.0, 0.0, 0.0, 0.5, 0.5, 99.0};
  const auto rep = check_ckn_classical(c);
  EXPECT_TRUE(rep.verdict);
  EXPECT_TRUE(rep.find("alpha-sigma>=0")->vacuous);
  EXPECT_TRUE(rep.find("alpha-sigma<=1")->vacuous);
}

TEST(CknRadial, Examples) {
  const auto rep = check_ckn_radial(radial_example());
  EXPECT_TRUE(rep.verdict);
  // lower bound -5/6 against the gap -1/4
  EXPECT_NEAR(rep.find("alpha-sigma>=lower")->residual, -0.25 + 5.0 / 6.0, 1e-14);
  EXPECT_NEAR(rep.find("alpha-sigma<=0")->residual, 0.25, 1e-14);

  CknParams up{3, 2.0, 12.0, 5.0, 1.0, 0.0, 0.25, -0.1, -0.1};
  ASSERT_NEAR(scaling_residual(up), 0.0, 1e-14);
  const auto r2 = check_ckn_radial(up);
  EXPECT_FALSE(r2.verdict);
  ASSERT_EQ(r2.failing().size(), 1u);
  EXPECT_EQ(r2.failing()[0], "alpha-sigma<=0");

  CknParams triv{3, 2.0, 3.0, 3.0, 0.0, 0.0, 0.5, 0.5, 0.0};
  const auto r3 = check_ckn_radial(triv);
  EXPECT_TRUE(r3.verdict);
  EXPECT_TRUE(r3.find("alpha-sigma>=lower")->vacuous);
  EXPECT_TRUE(r3.find("-sigma/n<(1/r-1/q)/a+1/q")->vacuous);
}

TEST(CknRadial, StrictLowerBoundAtPEqualsOne) {
  // p = 1 with alpha - sigma sitting exactly on the lower bound -2.
  CknParams c{3, 1.0, 2.0, 4.0, 0.5, 0.0, 0.0, 1.0, 2.0};
  ASSERT_NEAR(scaling_residual(c), 0.0, 1e-15);
  const auto rep = check_ckn_radial(c);
  const auto* e = rep.find("alpha-sigma>=lower");
  ASSERT_NE(e, nullptr);
  EXPECT_NEAR(e->residual, 0.0, 1e-14);
  EXPECT_FALSE(e->satisfied);
  ASSERT_EQ(rep.failing().size(), 1u);
}

TEST(CknRadial, VacuityDependsOnBasicConditions) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ue(1.0, 6.0), uw(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    CknParams c{3, ue(rng), ue(rng), 0.0, 0.0, uw(rng), uw(rng), 0.0, uw(rng)};
    c.r = c.q;
    c.gamma = c.beta;
    const auto rep = check_ckn_radial(c);
    bool basic = true;
    for (const char* l : {"p>=1", "q>=1", "r>0", "a>=0", "a<=1", "1/p+alpha/n>0",
                          "1/q+beta/n>0", "1/r+gamma/n>0", "scaling"}) {
      basic = basic && rep.find(l)->satisfied;
    }
    EXPECT_EQ(rep.verdict, basic);
  }
}

TEST(CknRadial, ClassicalBoundaryIncludedInRadial) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ua(0.05, 1.0), up(1.0, 4.0), uw(-0.5, 0.5);
  int checked = 0;
  for (int i = 0; i < 4000 && checked < 200; ++i) {
    CknParams c;
    c.n = 3;
    c.a = ua(rng);
    c.p = up(rng);
    c.q = up(rng);
    c.alpha = uw(rng);
    c.sigma = c.alpha;
    c.beta = uw(rng);
    c.gamma = c.a * c.sigma + (1.0 - c.a) * c.beta;
    const double inv_r = c.a * (1.0 / c.p + (c.alpha - 1.0) / 3.0) +
                         (1.0 - c.a) * (1.0 / c.q + c.beta / 3.0) - c.gamma / 3.0;
    if (inv_r <= 0.0) continue;
    c.r = 1.0 / inv_r;
    const auto cl = check_ckn_classical(c);
    const auto ra = check_ckn_radial(c);
    if (!cl.verdict || !ra.find("(1-a)/q<=1/r")->satisfied ||
        !ra.find("1/r<=a/p+(1-a)/q")->satisfied ||
        !ra.find("-sigma/n<(1/r-1/q)/a+1/q")->satisfied) {
      continue;
    }
    ++checked;
    EXPECT_TRUE(ra.verdict);
  }
  EXPECT_GT(checked, 20);
}

TEST(TraceRadial, Examples) {
  EXPECT_TRUE(check_trace_radial({3, 2.0, 3.0, 0.0, 0.0}).verdict);
  const auto r = check_trace_radial({3, 2.0, 3.0, -1.5, 1.5});
  EXPECT_FALSE(r.verdict);
  EXPECT_FALSE(r.find("alpha>-(n+1)/p+1")->satisfied);
  const auto r3 = check_trace_radial({1, 1.0, 1.0, 0.5, 0.5});
  EXPECT_FALSE(r3.find("alpha+beta<=1/p'")->satisfied);
  EXPECT_NEAR(r3.find("alpha+beta<=1/p'")->residual, -1.0, 1e-15);
}

TEST(TraceRadial, WeightShiftPreservesScaling) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> up(1.0, 4.0), uw(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    TraceParams t{1 + static_cast<int>(rng() % 5), up(rng), 0.0, uw(rng), uw(rng)};
    t.q = t.p * (1.0 + up(rng));
    TraceParams s = t;
    s.alpha += 1.0;
    s.beta -= 1.0;
    EXPECT_NEAR(trace_scaling_residual(s), trace_scaling_residual(t), 1e-12);
  }
}

TEST(TraceOperator, Examples) {
  EXPECT_TRUE(check_trace_operator({3, 2.0, 3.0, 0.0, 0.0}).verdict);
  const auto r = check_trace_operator({3, 2.0, 3.0, -1.0, 1.0});
  EXPECT_FALSE(r.verdict);
  EXPECT_NEAR(r.find("beta<n/q")->residual, 0.0, 1e-15);
  EXPECT_FALSE(check_trace_operator({3, 3.0, 2.0, 0.0, 0.0}).find("p<=q")->satisfied);
}

TEST(Ddd, Examples) {
  EXPECT_TRUE(check_ddd({3, 2.0, 2.0, 0.5, 0.5, 2.0}).verdict);
  const auto strict = check_ddd({3, 1.0, 2.0, -0.5, -0.5, 2.5});
  EXPECT_FALSE(strict.verdict);
  ASSERT_EQ(strict.failing().size(), 1u);
  EXPECT_EQ(strict.failing()[0], "alpha+beta>=(n-1)(1/q-1/p)");
  EXPECT_FALSE(check_ddd({3, 2.0, 2.0, 0.5, 0.5, 3.0}).find("gamma<n")->satisfied);
}

TEST(Reports, VerdictMatchesEntries) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0), up(0.5, 5.0);
  for (int i = 0; i < 500; ++i) {
    CknParams c{1 + static_cast<int>(rng() % 5), up(rng), up(rng), up(rng), std::abs(u(rng)) / 3.0,
                u(rng), u(rng), u(rng), u(rng)};
    for (const auto& rep : {check_ckn_classical(c), check_ckn_radial(c)}) {
      bool all = true;
      for (const auto& e : rep.conditions) all = all && e.satisfied;
      EXPECT_EQ(all, rep.verdict);
    }
  }
}

TEST(Validate, RejectsMalformedInput) {
  CknParams c = radial_example();
  c.n = 0;
  EXPECT_THROW(check_ckn_radial(c), Error);
  c = radial_example();
  c.alpha = std::nan("");
  EXPECT_THROW(check_ckn_classical(c), Error);
}
