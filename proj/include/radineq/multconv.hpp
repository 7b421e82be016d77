#pragma once

// Convolution on the multiplicative group (R+, .) with Haar measure dr/r, and
// on R \ {0} with dx/|x|. On a uniform log grid the group convolution becomes an
// ordinary discrete convolution over lags u = log(rho_i / rho_j).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "radineq/grids.hpp"

namespace radineq {

struct HaarFunction {
  LogGrid grid;
  std::vector<double> samples;

  HaarFunction(LogGrid g, std::vector<double> s);
  /// Samples f(rho_i) of a callable.
  static HaarFunction sample(LogGrid g, const std::function<double(double)>& f);
};

/// Function on R \ {0}: pos[i] = f(rho_i), neg[i] = f(-rho_i).
struct SignedHaarFunction {
  LogGrid grid;
  std::vector<double> pos;
  std::vector<double> neg;

  SignedHaarFunction(LogGrid g, std::vector<double> p, std::vector<double> n);
};

struct ConvolutionResult {
  HaarFunction result;
  /// An input does not decay to 1e-8 of its maximum at a grid end.
  bool truncated = false;
};

struct SignedConvolutionResult {
  SignedHaarFunction result;
  bool truncated = false;
};

/// (f*g)(rho_i) = sum_j w_j f(rho_j) g(rho_i / rho_j), O(N^2). Off-grid values of
/// g come from cubic interpolation in log(rho), zero outside the grid.
ConvolutionResult mult_convolve_direct(const HaarFunction& f, const HaarFunction& g);
ConvolutionResult mult_convolve_direct(const HaarFunction& f,
                                       const std::function<double(double)>& g);

/// Same sum through an FFT of the lag sequence g(exp(k h)), k = -(N-1)..N-1.
/// Errors are relative to the largest output.
ConvolutionResult mult_convolve_fast(const HaarFunction& f, const HaarFunction& g);
ConvolutionResult mult_convolve_fast(const HaarFunction& f,
                                     const std::function<double(double)>& g);

/// Convolution on R \ {0}: the positive output combines f+*g+ and f-*g-, the
/// negative output f+*g- and f-*g+.
SignedConvolutionResult mult_convolve_signed(const SignedHaarFunction& f,
                                             const SignedHaarFunction& g);

/// |f*g|_q / (|f|_p |g|_s) with Haar-measure norms; needs 1/q + 1 = 1/p + 1/s
/// and nonnegative inputs. Exponents may be +infinity.
double young_check(const HaarFunction& f, const HaarFunction& g, double p, double q, double s);

/// Haar-measure L^p norm on the grid (p may be +infinity).
double haar_norm(std::span<const double> samples, const LogGrid& grid, double p);

// ---- lag-sequence machinery shared with the operators ----

enum class SmallOutputs { keep, resum };

/// out_i = sum_j lags[i - j + N - 1] * f_j for i = 0..N-1; lags has 2N-1 entries.
/// FFT based. With resum, outputs near the transform roundoff are re-summed
/// directly so they stay accurate relative to themselves, at O(N) each.
std::vector<double> convolve_lags(std::span<const double> f, std::span<const double> lags,
                                  SmallOutputs small = SmallOutputs::resum);
std::vector<double> convolve_lags_direct(std::span<const double> f,
                                         std::span<const double> lags);

/// Lag weights W_k with sum_j W_{i-j} f_j ~ int f(t_i - u) K(u) du for a kernel
/// that is singular or sharply peaked at u = 0. Cells within near_cells steps of
/// the origin use product integration of a local cubic interpolant of f against
/// K; further lags use the trapezoid rule with fourth-order Gregory end weights
/// at the junction.
std::vector<double> singular_lag_weights(const std::function<double(double)>& kernel,
                                         double h, std::size_t n, int near_cells = 16);

}  // namespace radineq
