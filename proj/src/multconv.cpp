#include "radineq/multconv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "radineq/error.hpp"
#include "radineq/quadrature.hpp"

namespace radineq {
namespace {

constexpr double kDecayFraction = 1e-8;

bool decays_at_ends(std::span<const double> s) {
  double peak = 0.0;
  for (double v : s) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return true;
  return std::abs(s.front()) <= kDecayFraction * peak &&
         std::abs(s.back()) <= kDecayFraction * peak;
}

void require_same_grid(const LogGrid& a, const LogGrid& b) {
  if (!a.same_as(b)) fail(ErrorCode::invalid_argument, "convolution inputs must share a grid");
}

// FFTW plans are created under a lock and cached per transform length; execution
// through the new-array interface is thread safe.
class FftPlans {
 public:
  struct Pair {
    fftw_plan forward;
    fftw_plan backward;
  };

  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  Pair get(int len) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(len);
    if (it != plans_.end()) return it->second;
    double* real = fftw_alloc_real(static_cast<std::size_t>(len));
    fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(len / 2 + 1));
    Pair p{fftw_plan_dft_r2c_1d(len, real, spec, FFTW_ESTIMATE),
           fftw_plan_dft_c2r_1d(len, spec, real, FFTW_ESTIMATE)};
    fftw_free(real);
    fftw_free(spec);
    plans_.emplace(len, p);
    return p;
  }

  ~FftPlans() {
    for (auto& [len, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  std::mutex mutex_;
  std::map<int, Pair> plans_;
};

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) { std::fill(data, data + n, 0.0); }
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

// g(exp(k h)) for k = -(N-1)..N-1 from samples on the grid. When the grid puts
// rho = 1 on a node the quotients are exact nodes and no interpolation is used.
std::vector<double> lag_samples(const HaarFunction& g) {
  const std::size_t n = g.grid.size();
  const double h = g.grid.step();
  const double offset = -std::log(g.grid.rmin()) / h;  // index of rho = 1
  const double rounded = std::round(offset);
  const bool aligned = std::abs(offset - rounded) < 1e-9;
  std::vector<double> lags(2 * n - 1, 0.0);
  for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(n) + 1;
       k < static_cast<std::ptrdiff_t>(n); ++k) {
    double v = 0.0;
    if (aligned) {
      const auto idx = static_cast<std::ptrdiff_t>(rounded) + k;
      if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(n)) v = g.samples[static_cast<std::size_t>(idx)];
    } else {
      v = interpolate_log(g.samples, g.grid, std::exp(static_cast<double>(k) * h));
    }
    lags[static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(n) - 1)] = v;
  }
  return lags;
}

std::vector<double> lag_samples(const LogGrid& grid, const std::function<double(double)>& g) {
  const std::size_t n = grid.size();
  const double h = grid.step();
  std::vector<double> lags(2 * n - 1);
  for (std::size_t i = 0; i < lags.size(); ++i) {
    const double k = static_cast<double>(i) - static_cast<double>(n - 1);
    lags[i] = g(std::exp(k * h));
  }
  return lags;
}

std::vector<double> weighted(const HaarFunction& f) {
  std::vector<double> out(f.samples.size());
  const auto w = f.grid.haar_weights();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = w[i] * f.samples[i];
  return out;
}

template <class Convolve>
ConvolutionResult run(const HaarFunction& f, std::vector<double> lags, bool g_decays,
                      Convolve conv) {
  auto out = conv(weighted(f), lags);
  ConvolutionResult res{HaarFunction(f.grid, std::move(out)), false};
  res.truncated = !decays_at_ends(f.samples) || !g_decays;
  return res;
}


}  // namespace

HaarFunction::HaarFunction(LogGrid g, std::vector<double> s)
    : grid(std::move(g)), samples(std::move(s)) {
  if (samples.size() != grid.size()) {
    fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  }
  for (double v : samples) {
    if (!std::isfinite(v)) fail(ErrorCode::invalid_argument, "non-finite sample");
  }
}

HaarFunction HaarFunction::sample(LogGrid g, const std::function<double(double)>& f) {
  std::vector<double> s(g.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(g.node(i));
  return HaarFunction(std::move(g), std::move(s));
}

SignedHaarFunction::SignedHaarFunction(LogGrid g, std::vector<double> p, std::vector<double> n)
    : grid(std::move(g)), pos(std::move(p)), neg(std::move(n)) {
  if (pos.size() != grid.size() || neg.size() != grid.size()) {
    fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  }
}

std::vector<double> convolve_lags(std::span<const double> f, std::span<const double> lags,
                                  SmallOutputs small) {
  const std::size_t n = f.size();
  if (lags.size() != 2 * n - 1) fail(ErrorCode::invalid_argument, "lag sequence must have 2N-1 entries");
  std::size_t len = 1;
  while (len < 3 * n) len <<= 1;
  const auto plans = FftPlans::instance().get(static_cast<int>(len));
  const std::size_t nc = len / 2 + 1;

  RealBuffer a(len), b(len);
  ComplexBuffer fa(nc), fb(nc);
  std::copy(f.begin(), f.end(), a.data);
  std::copy(lags.begin(), lags.end(), b.data);
  fftw_execute_dft_r2c(plans.forward, a.data, fa.data);
  fftw_execute_dft_r2c(plans.forward, b.data, fb.data);
  for (std::size_t k = 0; k < nc; ++k) {
    const double re = fa.data[k][0] * fb.data[k][0] - fa.data[k][1] * fb.data[k][1];
    const double im = fa.data[k][0] * fb.data[k][1] + fa.data[k][1] * fb.data[k][0];
    fa.data[k][0] = re;
    fa.data[k][1] = im;
  }
  fftw_execute_dft_c2r(plans.backward, fa.data, a.data);
  std::vector<double> out(n);
  const double scale = 1.0 / static_cast<double>(len);
  for (std::size_t i = 0; i < n; ++i) out[i] = a.data[i + n - 1] * scale;
  if (small == SmallOutputs::keep) return out;

  // The transform error is absolute, of order eps log(len) |f|_2 |lags|_2. Outputs
  // small enough for it to show at 1e-8 relative are summed directly.
  double f2 = 0.0, w2 = 0.0;
  for (double v : f) f2 += v * v;
  for (double v : lags) w2 += v * v;
  const double noise = 4.0 * std::numeric_limits<double>::epsilon() * std::log2(static_cast<double>(len)) *
                       std::sqrt(f2 * w2);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(out[i]) >= 1e8 * noise) continue;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += lags[i + n - 1 - j] * f[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> convolve_lags_direct(std::span<const double> f,
                                         std::span<const double> lags) {
  const std::size_t n = f.size();
  if (lags.size() != 2 * n - 1) fail(ErrorCode::invalid_argument, "lag sequence must have 2N-1 entries");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += lags[i + n - 1 - j] * f[j];
    out[i] = acc;
  }
  return out;
}

namespace {
std::vector<double> fft_keep(std::span<const double> f, std::span<const double> lags) {
  return convolve_lags(f, lags, SmallOutputs::keep);
}
}  // namespace

ConvolutionResult mult_convolve_direct(const HaarFunction& f, const HaarFunction& g) {
  require_same_grid(f.grid, g.grid);
  return run(f, lag_samples(g), decays_at_ends(g.samples), convolve_lags_direct);
}

ConvolutionResult mult_convolve_direct(const HaarFunction& f,
                                       const std::function<double(double)>& g) {
  auto lags = lag_samples(f.grid, g);
  const bool dec = decays_at_ends(lags);
  return run(f, std::move(lags), dec, convolve_lags_direct);
}

ConvolutionResult mult_convolve_fast(const HaarFunction& f, const HaarFunction& g) {
  require_same_grid(f.grid, g.grid);
  return run(f, lag_samples(g), decays_at_ends(g.samples), fft_keep);
}

ConvolutionResult mult_convolve_fast(const HaarFunction& f,
                                     const std::function<double(double)>& g) {
  auto lags = lag_samples(f.grid, g);
  const bool dec = decays_at_ends(lags);
  return run(f, std::move(lags), dec, fft_keep);
}

SignedConvolutionResult mult_convolve_signed(const SignedHaarFunction& f,
                                             const SignedHaarFunction& g) {
  require_same_grid(f.grid, g.grid);
  const HaarFunction fp(f.grid, f.pos), fn(f.grid, f.neg);
  const HaarFunction gp(g.grid, g.pos), gn(g.grid, g.neg);
  const auto pp = mult_convolve_fast(fp, gp);
  const auto nn = mult_convolve_fast(fn, gn);
  const auto pn = mult_convolve_fast(fp, gn);
  const auto np = mult_convolve_fast(fn, gp);
  std::vector<double> pos(f.grid.size()), neg(f.grid.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    pos[i] = pp.result.samples[i] + nn.result.samples[i];
    neg[i] = pn.result.samples[i] + np.result.samples[i];
  }
  const bool trunc = pp.truncated || nn.truncated || pn.truncated || np.truncated;
  return {SignedHaarFunction(f.grid, std::move(pos), std::move(neg)), trunc};
}

double haar_norm(std::span<const double> s, const LogGrid& grid, double p) {
  if (s.size() != grid.size()) fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  if (!(p >= 1.0)) fail(ErrorCode::domain, "norm exponent must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : s) m = std::max(m, std::abs(v));
    return m;
  }
  // scaled by the maximum so large p neither underflows nor overflows
  double m = 0.0;
  for (double v : s) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  std::vector<double> pw(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) pw[i] = std::pow(std::abs(s[i]) / m, p);
  return m * std::pow(haar_integral(pw, grid), 1.0 / p);
}

double young_check(const HaarFunction& f, const HaarFunction& g, double p, double q, double s) {
  require_same_grid(f.grid, g.grid);
  for (double e : {p, q, s}) {
    if (!(e >= 1.0)) fail(ErrorCode::domain, "Young exponents must lie in [1, inf]");
  }
  const double relation = 1.0 / q + 1.0 - 1.0 / p - 1.0 / s;
  if (std::abs(relation) > 1e-12) {
    fail(ErrorCode::domain, "Young exponents must satisfy 1/q + 1 = 1/p + 1/s");
  }
  for (double v : f.samples) {
    if (v < 0.0) fail(ErrorCode::domain, "Young check needs nonnegative f");
  }
  for (double v : g.samples) {
    if (v < 0.0) fail(ErrorCode::domain, "Young check needs nonnegative g");
  }
  const auto conv = mult_convolve_fast(f, g);
  const double denom = haar_norm(f.samples, f.grid, p) * haar_norm(g.samples, g.grid, s);
  if (denom == 0.0) return 0.0;
  return haar_norm(conv.result.samples, f.grid, q) / denom;
}

std::vector<double> singular_lag_weights(const std::function<double(double)>& kernel, double h,
                                         std::size_t n, int near_cells) {
  const auto big_n = static_cast<std::ptrdiff_t>(n);
  const std::ptrdiff_t m_near = near_cells;
  if (near_cells < 2 || big_n - 1 < m_near + 4) {
    fail(ErrorCode::invalid_argument, "grid too small for the near-diagonal correction");
  }
  std::vector<double> w(2 * n - 1, 0.0);
  auto at = [&](std::ptrdiff_t k) -> double& {
    return w[static_cast<std::size_t>(k + big_n - 1)];
  };

  // Fourth-order Gregory weights at the start of each half-line.
  static constexpr double greg[4] = {251.0 / 720.0, 897.0 / 720.0, 633.0 / 720.0, 739.0 / 720.0};
  for (std::ptrdiff_t k = m_near; k < big_n; ++k) {
    const double c = (k - m_near < 4) ? greg[k - m_near] : 1.0;
    const double u = static_cast<double>(k) * h;
    at(k) += h * c * kernel(u);
    at(-k) += h * c * kernel(-u);
  }

  // Cubic Lagrange basis on nodes s = -1, 0, 1, 2.
  auto basis = [](int l, double s) {
    switch (l) {
      case -1: return -s * (s - 1.0) * (s - 2.0) / 6.0;
      case 0: return (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
      case 1: return -(s + 1.0) * s * (s - 2.0) / 2.0;
      default: return (s + 1.0) * s * (s - 1.0) / 6.0;
    }
  };
  // Never evaluate the kernel exactly at its singular point. The four basis
  // moments of a cell share their abscissas, so values are cached.
  std::map<double, double> cache;
  auto safe_kernel = [&](double u) {
    constexpr double tiny = 1e-100;
    if (std::abs(u) < tiny) u = std::copysign(tiny, u == 0.0 ? 1.0 : u);
    auto it = cache.find(u);
    if (it != cache.end()) return it->second;
    const double v = kernel(u);
    cache.emplace(u, v);
    return v;
  };

  using gauss20 = boost::math::quadrature::gauss<double, 20>;
  const auto& xs = gauss20::abscissa();
  const auto& ws = gauss20::weights();

  for (std::ptrdiff_t m = -m_near; m < m_near; ++m) {
    double mu[4] = {0.0, 0.0, 0.0, 0.0};
    if (m == 0 || m == -1) {
      // Cell touching u = 0; integrate in the distance d from the origin.
      for (int l = -1; l <= 2; ++l) {
        auto f = [&, l](double d) {
          const double s = (m == 0) ? d : 1.0 - d;
          const double u = (m == 0) ? d * h : -d * h;
          return basis(l, s) * safe_kernel(u);
        };
        mu[l + 1] = h * quad::tanh_sinh(f, 0.0, 1.0, 1e-12).value;
      }
    } else {
      for (std::size_t q = 0; q < xs.size(); ++q) {
        for (int sign : {-1, 1}) {
          if (q == 0 && xs[0] == 0.0 && sign == -1) continue;
          const double s = 0.5 + 0.5 * sign * xs[q];
          const double kv = kernel((static_cast<double>(m) + s) * h) * 0.5 * ws[q] * h;
          for (int l = -1; l <= 2; ++l) mu[l + 1] += basis(l, s) * kv;
        }
      }
    }
    for (int l = -1; l <= 2; ++l) at(m + l) += mu[l + 1];
  }
  return w;
}

}  // namespace radineq
