#pragma once

// Geometric grids on (0, inf) and their Haar-measure (dr/r) quadrature.

#include <cstddef>
#include <span>
#include <vector>

namespace radineq {

enum class QuadratureRule { trapezoid, simpson };

/// Nodes rho_i = rmin * exp(i*h), i = 0..N-1, with rho_{N-1} == rmax exactly.
class LogGrid {
 public:
  LogGrid(double rmin, double rmax, std::size_t n,
          QuadratureRule rule = QuadratureRule::trapezoid);

  static LogGrid default_radial() { return LogGrid(1e-5, 1e5, 4096); }

  std::size_t size() const noexcept { return nodes_.size(); }
  double rmin() const noexcept { return rmin_; }
  double rmax() const noexcept { return rmax_; }
  /// Uniform step in log(rho).
  double step() const noexcept { return h_; }
  QuadratureRule rule() const noexcept { return rule_; }

  double node(std::size_t i) const { return nodes_[i]; }
  double log_node(std::size_t i) const;
  std::span<const double> nodes() const noexcept { return nodes_; }
  /// Weights for the integral of f(rho) drho/rho over [rmin, rmax].
  std::span<const double> haar_weights() const noexcept { return weights_; }

  /// Grid dilated by exp(k*h): node i of the result equals node i+k of this grid
  /// (up to rounding of the endpoints).
  LogGrid shifted(std::ptrdiff_t k) const;
  /// Same range, twice the resolution (2N-1 nodes).
  LogGrid refined() const;

  bool same_as(const LogGrid& other) const noexcept;

 private:
  double rmin_;
  double rmax_;
  double h_;
  QuadratureRule rule_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// (r, zbar) grid for half-space fields in the scaled variables z = r * zbar.
struct ProductGrid {
  LogGrid rgrid;
  LogGrid zgrid;

  ProductGrid(LogGrid r, LogGrid z) : rgrid(std::move(r)), zgrid(std::move(z)) {}
  static ProductGrid default_grid() {
    return ProductGrid(LogGrid::default_radial(), LogGrid(1e-4, 1e4, 385));
  }
  ProductGrid refined() const { return ProductGrid(rgrid.refined(), zgrid.refined()); }

  std::size_t size() const noexcept { return rgrid.size() * zgrid.size(); }
  /// Row-major index: one row of rgrid.size() samples per zbar node.
  std::size_t index(std::size_t ir, std::size_t jz) const noexcept {
    return jz * rgrid.size() + ir;
  }
};

struct IntegralResult {
  double value = 0.0;
  /// Analytic tail added beyond the grid ends (power-law extrapolation).
  double tail = 0.0;
  /// Set when an end of the integrand does not decay and its boundary sample
  /// exceeds 1e-8 of the total, or when the extrapolated tails are unreliable.
  bool truncated = false;
};

/// Quadrature of f(rho) drho/rho over [rmin, rmax]; no tail handling.
double haar_integral(std::span<const double> samples, const LogGrid& grid);

/// Integral over (0, inf) of f(rho) rho^exponent drho/rho. Decaying ends are
/// completed by power-law extrapolation fitted on the two outermost nodes.
IntegralResult radial_measure_integral(std::span<const double> samples, const LogGrid& grid,
                                       double exponent);

/// Integral over (0, inf) of g(zbar) dzbar from samples on the zbar grid. The
/// piece below the first node uses g ~ A + B log(zbar); the far end is completed
/// by a power law.
IntegralResult zbar_integral(std::span<const double> samples, const LogGrid& zgrid);

/// Same completion rule as radial_measure_integral, applied to integrand samples
/// already expressed against drho/rho.
IntegralResult haar_integral_with_tails(std::span<const double> haar_samples,
                                        const LogGrid& grid);

/// Local cubic interpolation in log(rho); zero outside [rmin, rmax].
double interpolate_log(std::span<const double> samples, const LogGrid& grid, double rho);

}  // namespace radineq
