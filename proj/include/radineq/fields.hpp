#pragma once

// Radial test profiles and separable half-space fields with analytic derivatives.

#include <string_view>
#include <vector>

#include "radineq/exponents.hpp"
#include "radineq/grids.hpp"

namespace radineq {

enum class Family { gaussian, bump, power_tail };

std::string_view family_name(Family f);
/// Accepts "gaussian", "bump", "power_tail" (also "power-tail").
Family parse_family(std::string_view name);

/// Parameters of a built-in radial family, x = rho / scale:
///   gaussian   : exp(-x^2)
///   bump       : exp(-1/(1-x^2)) for x < 1 when transition == 0; otherwise a
///                plateau equal to 1 up to x = 1 - transition followed by a smooth
///                step down to 0 at x = 1 (transition in (0, 1))
///   power_tail : (1 + x^2)^{-lambda/2}, times a smooth cutoff falling from 1 at
///                rho = cutoff to 0 at rho = 2 cutoff when cutoff > 0
struct FamilySpec {
  Family family = Family::gaussian;
  double scale = 1.0;
  double tail_exponent = 0.0;
  double transition = 0.0;
  double cutoff = 0.0;
};

void validate(const FamilySpec& spec);

/// Analytic value and derivative in rho.
double profile_value(const FamilySpec& spec, double rho);
double profile_derivative(const FamilySpec& spec, double rho);

/// Checks that every norm in the weighted inequality is finite for this family:
/// the behaviour at the origin (u ~ 1, u' ~ rho) and, without a cutoff, the power
/// tail at infinity. Throws Error(domain) naming the offending norm.
void validate_for(const FamilySpec& spec, const CknParams& params);

struct RadialProfile {
  LogGrid grid;
  std::vector<double> u;
  /// u'(rho), analytic.
  std::vector<double> du;
  FamilySpec spec;
};

RadialProfile make_radial(const FamilySpec& spec, const LogGrid& grid);

/// u_lambda(rho) = u(lambda rho). The family is closed under dilation, so the
/// result is resampled exactly. Throws Error(numerical) when the dilated profile
/// no longer decays inside the grid or its scale drops below 100 rmin.
RadialProfile dilate(const RadialProfile& u, double lambda);

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);
double smooth_step_derivative(double t);

enum class ZProfile { gaussian, exponential };

/// Height profile v(z): exp(-(z/scale)^2) or exp(-z/scale).
struct ZSpec {
  ZProfile kind = ZProfile::gaussian;
  double scale = 1.0;
};

std::string_view zprofile_name(ZProfile z);
ZProfile parse_zprofile(std::string_view name);

/// f(y, z) = u(|y|) v(z) on R^n x R+, sampled on the (r, zbar) product grid at
/// z = r zbar. Row j of f holds f(r_i, r_i zbar_j).
struct HalfSpaceField {
  ProductGrid pgrid;
  std::vector<double> f;
  std::vector<double> grad_mag;
  /// f(r_i, 0) on pgrid.rgrid.
  std::vector<double> trace0;
  FamilySpec uspec;
  ZSpec vspec;

  double value(double r, double z) const;
  double gradient_magnitude(double r, double z) const;
};

HalfSpaceField make_halfspace(const FamilySpec& u, const ZSpec& v, const ProductGrid& pgrid);

/// f_lambda(y, z) = f(lambda y, lambda z).
HalfSpaceField dilate(const HalfSpaceField& f, double lambda);

}  // namespace radineq
