#include "radineq/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radineq/error.hpp"

namespace radineq {
namespace {

constexpr double kDecayFraction = 1e-8;

double classic_bump(double x) {
  if (x >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

double classic_bump_dx(double x) {
  if (x >= 1.0) return 0.0;
  const double d = 1.0 - x * x;
  return -2.0 * x / (d * d) * std::exp(-1.0 / d);
}

// Outer cutoff of the power tail: 1 up to R, 0 beyond 2R.
double cutoff_factor(double rho, double R) { return R > 0.0 ? smooth_step(2.0 - rho / R) : 1.0; }

double cutoff_factor_drho(double rho, double R) {
  return R > 0.0 ? -smooth_step_derivative(2.0 - rho / R) / R : 0.0;
}

double zvalue(const ZSpec& v, double z) {
  const double t = z / v.scale;
  return v.kind == ZProfile::gaussian ? std::exp(-t * t) : std::exp(-t);
}

double zderivative(const ZSpec& v, double z) {
  const double t = z / v.scale;
  return v.kind == ZProfile::gaussian ? -2.0 * t / v.scale * std::exp(-t * t)
                                      : -std::exp(-t) / v.scale;
}

void require_finite_origin(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::domain, std::string(what) + " diverges at the origin");
}

void require_finite_tail(bool ok, const char* what) {
  if (!ok) {
    fail(ErrorCode::domain,
         std::string(what) + " diverges at infinity for this power_tail exponent");
  }
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::bump: return "bump";
    case Family::power_tail: return "power_tail";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "bump") return Family::bump;
  if (name == "power_tail" || name == "power-tail") return Family::power_tail;
  fail(ErrorCode::invalid_argument, "unknown family '" + std::string(name) + "'");
}

std::string_view zprofile_name(ZProfile z) {
  return z == ZProfile::gaussian ? "gaussian" : "exponential";
}

ZProfile parse_zprofile(std::string_view name) {
  if (name == "gaussian") return ZProfile::gaussian;
  if (name == "exponential") return ZProfile::exponential;
  fail(ErrorCode::invalid_argument, "unknown z profile '" + std::string(name) + "'");
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // 1 / (1 + exp(1/t - 1/(1-t))) is the ratio e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)})
  const double e = 1.0 / t - 1.0 / (1.0 - t);
  if (e > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(e));
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double s = smooth_step(t);
  return s * (1.0 - s) * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t)));
}

void validate(const FamilySpec& s) {
  if (!(s.scale > 0.0) || !std::isfinite(s.scale)) {
    fail(ErrorCode::invalid_argument, "family scale must be positive");
  }
  if (s.family == Family::power_tail && !(s.tail_exponent > 0.0)) {
    fail(ErrorCode::invalid_argument, "power_tail needs tail_exponent > 0");
  }
  if (!(s.transition >= 0.0 && s.transition < 1.0)) {
    fail(ErrorCode::invalid_argument, "bump transition must lie in [0, 1)");
  }
  if (!(s.cutoff >= 0.0) || !std::isfinite(s.cutoff)) {
    fail(ErrorCode::invalid_argument, "cutoff must be >= 0");
  }
}

double profile_value(const FamilySpec& s, double rho) {
  const double x = rho / s.scale;
  switch (s.family) {
    case Family::gaussian: return std::exp(-x * x);
    case Family::bump:
      if (s.transition == 0.0) return classic_bump(x);
      return smooth_step((1.0 - x) / s.transition);
    case Family::power_tail:
      return std::pow(1.0 + x * x, -0.5 * s.tail_exponent) * cutoff_factor(rho, s.cutoff);
  }
  return 0.0;
}

double profile_derivative(const FamilySpec& s, double rho) {
  const double x = rho / s.scale;
  switch (s.family) {
    case Family::gaussian: return -2.0 * x / s.scale * std::exp(-x * x);
    case Family::bump:
      if (s.transition == 0.0) return classic_bump_dx(x) / s.scale;
      return -smooth_step_derivative((1.0 - x) / s.transition) / (s.transition * s.scale);
    case Family::power_tail: {
      const double base = std::pow(1.0 + x * x, -0.5 * s.tail_exponent);
      const double dbase = -s.tail_exponent * x / (s.scale * (1.0 + x * x)) * base;
      return dbase * cutoff_factor(rho, s.cutoff) + base * cutoff_factor_drho(rho, s.cutoff);
    }
  }
  return 0.0;
}

void validate_for(const FamilySpec& s, const CknParams& c) {
  validate(s);
  const double n = c.n;
  require_finite_origin(c.gamma * c.r + n > 0.0, "|x|^gamma u in L^r");
  if (c.a < 1.0) require_finite_origin(c.beta * c.q + n > 0.0, "|x|^beta u in L^q");
  const bool flat_core = s.family == Family::bump && s.transition > 0.0;
  if (c.a > 0.0 && !flat_core) {
    require_finite_origin((c.alpha + 1.0) * c.p + n > 0.0, "|x|^alpha grad u in L^p");
  }
  if (s.family == Family::power_tail && s.cutoff == 0.0) {
    const double lam = s.tail_exponent;
    require_finite_tail((c.gamma - lam) * c.r + n < 0.0, "|x|^gamma u in L^r");
    if (c.a < 1.0) require_finite_tail((c.beta - lam) * c.q + n < 0.0, "|x|^beta u in L^q");
    if (c.a > 0.0) {
      require_finite_tail((c.alpha - lam - 1.0) * c.p + n < 0.0, "|x|^alpha grad u in L^p");
    }
  }
}

RadialProfile make_radial(const FamilySpec& spec, const LogGrid& grid) {
  validate(spec);
  RadialProfile p{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size()), spec};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p.u[i] = profile_value(spec, grid.node(i));
    p.du[i] = profile_derivative(spec, grid.node(i));
  }
  return p;
}

RadialProfile dilate(const RadialProfile& u, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    fail(ErrorCode::invalid_argument, "dilation factor must be positive");
  }
  FamilySpec s = u.spec;
  s.scale /= lambda;
  s.cutoff /= lambda;
  if (s.scale < 100.0 * u.grid.rmin()) {
    fail(ErrorCode::numerical, "dilated support escapes the grid");
  }
  auto out = make_radial(s, u.grid);
  const bool power_law_end = s.family == Family::power_tail && s.cutoff == 0.0;
  if (!power_law_end) {
    double peak = 0.0;
    for (double v : out.u) peak = std::max(peak, std::abs(v));
    if (std::abs(out.u.back()) > kDecayFraction * peak) {
      fail(ErrorCode::numerical, "dilated support escapes the grid");
    }
  }
  return out;
}

double HalfSpaceField::value(double r, double z) const {
  return profile_value(uspec, r) * zvalue(vspec, z);
}

double HalfSpaceField::gradient_magnitude(double r, double z) const {
  const double a = profile_derivative(uspec, r) * zvalue(vspec, z);
  const double b = profile_value(uspec, r) * zderivative(vspec, z);
  return std::hypot(a, b);
}

HalfSpaceField make_halfspace(const FamilySpec& u, const ZSpec& v, const ProductGrid& pgrid) {
  validate(u);
  if (!(v.scale > 0.0) || !std::isfinite(v.scale)) {
    fail(ErrorCode::invalid_argument, "z profile scale must be positive");
  }
  HalfSpaceField f{pgrid, {}, {}, {}, u, v};
  const auto& rg = pgrid.rgrid;
  const auto& zg = pgrid.zgrid;
  f.f.resize(pgrid.size());
  f.grad_mag.resize(pgrid.size());
  f.trace0.resize(rg.size());
  std::vector<double> uval(rg.size()), uder(rg.size());
  for (std::size_t i = 0; i < rg.size(); ++i) {
    uval[i] = profile_value(u, rg.node(i));
    uder[i] = profile_derivative(u, rg.node(i));
    f.trace0[i] = uval[i] * zvalue(v, 0.0);
  }
  for (std::size_t j = 0; j < zg.size(); ++j) {
    for (std::size_t i = 0; i < rg.size(); ++i) {
      const double z = rg.node(i) * zg.node(j);
      const double vz = zvalue(v, z), dvz = zderivative(v, z);
      const std::size_t k = pgrid.index(i, j);
      f.f[k] = uval[i] * vz;
      f.grad_mag[k] = std::hypot(uder[i] * vz, uval[i] * dvz);
    }
  }
  return f;
}

HalfSpaceField dilate(const HalfSpaceField& f, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    fail(ErrorCode::invalid_argument, "dilation factor must be positive");
  }
  FamilySpec u = f.uspec;
  u.scale /= lambda;
  u.cutoff /= lambda;
  ZSpec v = f.vspec;
  v.scale /= lambda;
  if (u.scale < 100.0 * f.pgrid.rgrid.rmin()) {
    fail(ErrorCode::numerical, "dilated support escapes the grid");
  }
  return make_halfspace(u, v, f.pgrid);
}

}  // namespace radineq
