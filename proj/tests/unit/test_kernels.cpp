#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "radineq/error.hpp"
#include "radineq/kernels.hpp"

using namespace radineq;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Independent brute force of the defining t-integral for odd n (no endpoint weight
// singularity), used only away from the corner.
double brute_force_I(double a, double z, int n) {
  auto f = [&](double t) {
    return std::pow(1.0 - t * t, 0.5 * (n - 3)) / std::pow(1.0 - 2.0 * a * t + a * a + z * z, 0.5 * n);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 20, 1e-13);
}

}  // namespace

TEST(UnitSphere, Areas) {
  EXPECT_NEAR(unit_sphere_area(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(4), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(KernelI, Examples) {
  EXPECT_NEAR(kernel_I(1.0, 1.0, 3).value, 1.0 - 1.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(kernel_I(1e-12, 0.0, 3).value, 2.0, 1e-9);
  EXPECT_NEAR(kernel_I(1e-12, 0.0, 2).value, std::numbers::pi, 1e-9);
  EXPECT_NEAR(kernel_I_closed_n3(1.0, 1.0), 1.0 - 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(kernel_I_closed_n3(2.0, 0.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(kernel_I_closed_n3(1.0, 1e-6) * 1e-6, 1.0, 1e-5);
}

TEST(KernelI, Errors) {
  try {
    kernel_I(1.0, 0.0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "kernel singular point");
  }
  try {
    kernel_I(0.5, 0.1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "use n=1 direct kernel");
  }
  EXPECT_THROW(kernel_I(-1.0, 0.1, 3), Error);
}

TEST(KernelI, ClosedFormGrid) {
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double a = std::pow(10.0, -2.0 + 4.0 * i / 39.0);
      const double z = std::pow(10.0, -2.0 + 4.0 * j / 39.0);
      if (std::abs(1.0 - a) + z < 1e-3) continue;
      EXPECT_LT(rel(kernel_I(a, z, 3).value, kernel_I_closed_n3(a, z)), 1e-8) << a << " " << z;
    }
  }
}

TEST(KernelI, NearCornerAccuracy) {
  for (double d : {1e-4, 1e-6, 1e-8}) {
    for (double z : {0.0, 1e-5, 1e-3}) {
      const double a = 1.0 + d;
      // a - 1 is exact, so the closed form sees the same point as the log variant
      EXPECT_LT(rel(kernel_I(a, z, 3).value, kernel_I_closed_n3(a, z)), 1e-9);
      EXPECT_LT(rel(kernel_I_log(std::log1p(a - 1.0), z, 3), kernel_I_closed_n3(a, z)), 1e-9);
    }
  }
}

TEST(KernelI, BruteForceOddDimensions) {
  for (int n : {5, 7}) {
    for (double a : {0.1, 0.7, 1.6, 9.0}) {
      for (double z : {0.05, 0.5, 3.0}) {
        EXPECT_LT(rel(kernel_I(a, z, n).value, brute_force_I(a, z, n)), 1e-9);
      }
    }
  }
}

TEST(KernelI, InversionIdentity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n : {2, 3, 4, 5}) {
    for (int i = 0; i < 40; ++i) {
      const double a = std::pow(10.0, u(rng)), z = std::pow(10.0, u(rng));
      if (std::abs(1.0 - a) + z < 1e-3) continue;
      const double lhs = kernel_I(a, z, n).value;
      const double rhs = std::pow(a, -n) * kernel_I(1.0 / a, z / a, n).value;
      EXPECT_LT(rel(lhs, rhs), 1e-9);
    }
  }
}

TEST(KernelI, DecreasingInZ) {
  for (int n : {2, 3, 4, 5}) {
    for (double a : {0.3, 1.0, 2.5}) {
      double prev = INFINITY;
      for (int j = 0; j < 30; ++j) {
        const double z = 1e-3 * std::pow(10.0, j * 0.2);
        const double v = kernel_I(a, z, n).value;
        EXPECT_LT(v, prev);
        prev = v;
      }
    }
  }
}

TEST(SphereKernel, Examples) {
  EXPECT_NEAR(sphere_kernel(2.0, 1.0, 1.0, 3), 1.0, 1e-11);
  EXPECT_NEAR(sphere_kernel(1.0, 2.0, 1.0, 3), 1.0, 1e-11);
  EXPECT_LT(rel(sphere_kernel(1.0, 1e3, 2.0, 3), 2e-6), 5e-3);
  EXPECT_EQ(sphere_kernel(0.7, 1.9, 1.3, 4), sphere_kernel(1.9, 0.7, 1.3, 4));
  try {
    sphere_kernel(1.0, 2.0, 3.0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "Riesz exponent out of range");
  }
  EXPECT_THROW(sphere_kernel(1.0, 1.0, 2.5, 3), Error);
  // integrable diagonal when gamma < n - 1
  EXPECT_TRUE(std::isfinite(sphere_kernel(1.0, 1.0, 1.5, 3)));
}

TEST(SphereKernel, NewtonClosedForm) {
  // n = 3, gamma = 1: 2 min(rho, r) / (rho r)
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double rho = std::pow(10.0, u(rng)), r = std::pow(10.0, u(rng));
    EXPECT_LT(rel(sphere_kernel(rho, r, 1.0, 3), 2.0 * std::min(rho, r) / (rho * r)), 1e-9);
  }
  EXPECT_LT(rel(sphere_kernel_log(1e-7, 1.0, 3), 2.0 / std::exp(1e-7)), 1e-9);
}

TEST(Asymptotics, Exponents) {
  for (int n : {2, 3, 4, 5}) {
    EXPECT_NEAR(kernel_asymptotic_fit(n, AsymptoticRegime::small_a).exponent, -0.5 * n, 0.02);
    EXPECT_NEAR(kernel_asymptotic_fit(n, AsymptoticRegime::large_r).exponent, -n, 0.02);
    EXPECT_NEAR(kernel_asymptotic_fit(n, AsymptoticRegime::singular).exponent, -1.0, 0.05);
  }
  EXPECT_NEAR(kernel_asymptotic_fit(3, AsymptoticRegime::singular).exponent, -1.0, 0.02);
}
