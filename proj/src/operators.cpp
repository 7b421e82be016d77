#include "radineq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "radineq/error.hpp"
#include "radineq/kernels.hpp"
#include "radineq/multconv.hpp"
#include "radineq/quadrature.hpp"

namespace radineq {
namespace {

constexpr int kNearCells = 24;
constexpr double kDecayFraction = 1e-8;
constexpr double kCornerLimit = 0.01;
constexpr double kDirectTol = 1e-9;
constexpr double kInnerTol = 1e-11;

void require_norm_args(double p, int n) {
  if (!(p >= 1.0) || std::isinf(p)) fail(ErrorCode::domain, "norm exponent must satisfy 1 <= p < inf");
  if (n < 1) fail(ErrorCode::invalid_argument, "dimension n must be >= 1");
}

double max_abs(std::span<const double> s) {
  double m = 0.0;
  for (double v : s) m = std::max(m, std::abs(v));
  return m;
}

// int_0^pi sin^m
double sine_power_integral(int m) {
  return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (m + 1)) / std::tgamma(0.5 * m + 1.0);
}

using Extension = std::function<double(double)>;

// Adds the part of the convolution coming from r < rmin, out_i += sum_{m>=1} e_m W_{i+m}
// with e_m the data at r_{-m} = rmin e^{-mh}. When the data are known analytically
// (below) the sequence is evaluated until its ratio settles; otherwise, and beyond
// that point, it continues geometrically (a power law in r). Lags past the stored
// range continue the ratio of the last two. The geometric part
// S_k = sum_{l>=1} q^l W_{k+l} obeys S_k = q (W_{k+1} + S_{k+1}).
// Returns false when the model is unusable or visibly inconsistent with the data.
bool add_left_tail(std::span<const double> data, std::span<const double> lags, const LogGrid& grid,
                   const Extension& below, std::vector<double>& out) {
  const std::size_t N = data.size();
  if (N < 3) return data.empty() || data.front() == 0.0;
  const bool small = std::abs(data[0]) <= kDecayFraction * max_abs(data);

  std::vector<double> e{data[0]};
  double q = 0.0;
  bool ok = true;
  if (below) {
    constexpr int max_ext = 4000;
    double prev = std::numeric_limits<double>::quiet_NaN();
    bool settled = false;
    for (int m = 1; m <= max_ext && !settled; ++m) {
      const double v = below(grid.rmin() * std::exp(-m * grid.step()));
      e.push_back(v);
      if (v == 0.0 || e[m - 1] == 0.0) {
        q = 0.0;
        settled = true;
        break;
      }
      q = v / e[m - 1];
      if (m >= 2 && std::abs(q / prev - 1.0) < 1e-9) settled = true;
      prev = q;
    }
    if (!settled) ok = std::abs(e.back()) <= kDecayFraction * max_abs(data);
  } else {
    if (data[0] == 0.0) return true;
    if (data[1] == 0.0 || !(data[0] / data[1] > 0.0)) return small;
    q = data[0] / data[1];
    // a second ratio one node further in checks the power-law model
    ok = (data[2] != 0.0 && std::abs(data[1] / data[2] / q - 1.0) <= 1e-2) || small;
  }
  const std::size_t M = e.size() - 1;

  const double wl = lags[2 * N - 2], wl2 = lags[2 * N - 3];
  if (!(wl > 0.0 && wl2 > 0.0)) return small;
  const double rr = wl / wl2;
  auto lag = [&](std::size_t k) {
    return k <= N - 1 ? lags[k + N - 1] : wl * std::pow(rr, static_cast<double>(k - (N - 1)));
  };
  const double qr = q * rr;
  if (!(qr < 1.0 && q >= 0.0)) return small;

  // S_k for k = 0 .. N-1+M, from the top down
  const std::size_t K = N - 1 + M;
  std::vector<double> S(K + 1);
  S[K] = lag(K) * qr / (1.0 - qr);
  for (std::size_t k = K; k-- > 0;) S[k] = q * (lag(k + 1) + S[k + 1]);
  for (std::size_t i = 0; i < N; ++i) {
    double acc = e[M] * S[i + M];
    for (std::size_t m = 1; m <= M; ++m) acc += e[m] * lag(i + m);
    out[i] += acc;
  }
  return ok;
}

bool decays_right(std::span<const double> s) {
  const double peak = max_abs(s);
  return peak == 0.0 || std::abs(s.back()) <= kDecayFraction * peak;
}

}  // namespace

NormResult weighted_norm_radial(std::span<const double> u, const LogGrid& grid, double w,
                                double p, int n) {
  require_norm_args(p, n);
  if (u.size() != grid.size()) fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  const double m = max_abs(u);
  if (m == 0.0) return {};
  std::vector<double> pw(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) pw[i] = std::pow(std::abs(u[i]) / m, p);
  const auto integral = radial_measure_integral(pw, grid, w * p + n);
  NormResult r;
  r.truncated = integral.truncated;
  const double total = unit_sphere_area(n) * integral.value;
  r.value = total > 0.0 ? m * std::pow(total, 1.0 / p) : 0.0;
  if (!std::isfinite(r.value)) r.truncated = true;
  return r;
}

NormResult weighted_norm_radial(const RadialProfile& u, double w, double p, int n) {
  return weighted_norm_radial(u.u, u.grid, w, p, n);
}

NormResult weighted_norm_halfspace(std::span<const double> g, const ProductGrid& pg, double alpha,
                                   double p, int n) {
  require_norm_args(p, n);
  if (g.size() != pg.size()) fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  const double m = max_abs(g);
  if (m == 0.0) return {};
  const auto& rg = pg.rgrid;
  const auto& zg = pg.zgrid;
  // |(r, r zbar)|^{alpha p} = r^{alpha p} (1 + zbar^2)^{alpha p / 2}; dz = r dzbar
  std::vector<double> zweight(zg.size());
  for (std::size_t j = 0; j < zg.size(); ++j) {
    zweight[j] = std::pow(1.0 + zg.node(j) * zg.node(j), 0.5 * alpha * p);
  }
  std::vector<double> inner(rg.size()), column(zg.size());
  bool truncated = false;
  for (std::size_t i = 0; i < rg.size(); ++i) {
    for (std::size_t j = 0; j < zg.size(); ++j) {
      column[j] = zweight[j] * std::pow(std::abs(g[pg.index(i, j)]) / m, p);
    }
    const auto zi = zbar_integral(column, zg);
    inner[i] = zi.value;
    if (zi.truncated) truncated = true;
  }
  // inner truncation only matters where the row carries weight
  if (truncated) {
    truncated = false;
    const double peak = max_abs(inner);
    for (std::size_t i = 0; i < rg.size(); ++i) {
      for (std::size_t j = 0; j < zg.size(); ++j) {
        column[j] = zweight[j] * std::pow(std::abs(g[pg.index(i, j)]) / m, p);
      }
      if (zbar_integral(column, zg).truncated && std::abs(inner[i]) > 1e-6 * peak) truncated = true;
    }
  }
  const auto outer = radial_measure_integral(inner, rg, alpha * p + n + 1.0);
  NormResult r;
  r.truncated = truncated || outer.truncated;
  const double total = unit_sphere_area(n) * outer.value;
  r.value = total > 0.0 ? m * std::pow(total, 1.0 / p) : 0.0;
  if (!std::isfinite(r.value)) r.truncated = true;
  return r;
}

namespace {

// below(r) gives v(r) for r < rmin when v is known analytically
OperatorResult riesz_impl(std::span<const double> v, const LogGrid& grid, double gamma, int n,
                          const Extension& below) {
  if (n < 2) fail(ErrorCode::domain, "Riesz potential needs n >= 2");
  if (!(gamma > 0.0 && gamma < n)) fail(ErrorCode::domain, "Riesz exponent out of range");
  if (v.size() != grid.size()) fail(ErrorCode::invalid_argument, "sample count does not match grid size");
  const std::size_t N = grid.size();
  // T v(rho) = omega_{n-2} int v(r) r^{n-gamma} kappa(rho / r) dr/r, kappa(a) = K(a, 1)
  std::vector<double> h(N);
  for (std::size_t j = 0; j < N; ++j) h[j] = v[j] * std::pow(grid.node(j), n - gamma);
  const double omega = unit_sphere_area(n - 1);
  const auto w = singular_lag_weights(
      [&](double u) { return omega * sphere_kernel_log(u, gamma, n); }, grid.step(), N, kNearCells);
  OperatorResult res{grid, convolve_lags(h, w), Method::convolution, {}};
  Extension hb;
  if (below) hb = [&](double r) { return below(r) * std::pow(r, n - gamma); };
  const bool tail_ok = add_left_tail(h, w, grid, hb, res.values);
  res.report.truncated = !tail_ok || !decays_right(h);
  return res;
}

}  // namespace

OperatorResult riesz_radial(std::span<const double> v, const LogGrid& grid, double gamma, int n) {
  return riesz_impl(v, grid, gamma, n, {});
}

OperatorResult riesz_radial(const RadialProfile& v, double gamma, int n) {
  const FamilySpec spec = v.spec;
  return riesz_impl(v.u, v.grid, gamma, n, [spec](double r) { return profile_value(spec, r); });
}

OperatorResult representation_bound(const RadialProfile& u, int n) {
  std::vector<double> g(u.du.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::abs(u.du[i]);
  const FamilySpec spec = u.spec;
  return riesz_impl(g, u.grid, n - 1.0, n,
                    [spec](double r) { return std::abs(profile_derivative(spec, r)); });
}

RepresentationMargin representation_margin(const RadialProfile& u, const OperatorResult& bound,
                                           int n) {
  const double omega = unit_sphere_area(n);
  const double peak = max_abs(u.u);
  RepresentationMargin m;
  m.min_margin = INFINITY;
  for (std::size_t i = 0; i < u.u.size(); ++i) {
    const double gap = bound.values[i] / omega - std::abs(u.u[i]);
    const double rel = peak > 0.0 ? gap / peak : gap;
    if (rel < m.min_margin) {
      m.min_margin = rel;
      m.worst_node = i;
    }
  }
  return m;
}

OperatorResult trace_apply(const HalfSpaceField& f, int n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "dimension n must be >= 1");
  const auto& rg = f.pgrid.rgrid;
  const auto& zg = f.pgrid.zgrid;
  const std::size_t N = rg.size();
  const std::size_t Nz = zg.size();
  const double h = rg.step();
  const double omega = n >= 2 ? unit_sphere_area(n - 1) : 1.0;

  // columns[i * Nz + j] = (h_zbar * I(., zbar))(rho_i) with h_zbar(r) = r f(r, r zbar)
  std::vector<double> columns(N * Nz);
  std::vector<double> row(N);
  bool truncated = false;
  for (std::size_t j = 0; j < Nz; ++j) {
    const double zb = zg.node(j);
    for (std::size_t i = 0; i < N; ++i) row[i] = rg.node(i) * f.f[f.pgrid.index(i, j)];
    const Extension column_below = [&f, zb](double r) { return r * f.value(r, r * zb); };
    if (!decays_right(row)) truncated = true;
    std::vector<double> out;
    if (n >= 2) {
      const auto w = singular_lag_weights(
          [&](double u) { return omega * kernel_I_log(u, zb, n); }, h, N, kNearCells);
      out = convolve_lags(row, w);
      if (!add_left_tail(row, w, rg, column_below, out)) truncated = true;
    } else {
      // R \ {0}: f is even in y, so the positive ray collects the kernel on both
      // rays, 1/|a - 1| and 1/|a + 1| regularised by zbar.
      const auto wp = singular_lag_weights(
          [&](double u) {
            const double d = std::expm1(u);
            return 1.0 / std::sqrt(d * d + zb * zb);
          },
          h, N, kNearCells);
      const auto wn = singular_lag_weights(
          [&](double u) {
            const double d = std::exp(u) + 1.0;
            return 1.0 / std::sqrt(d * d + zb * zb);
          },
          h, N, kNearCells);
      out = convolve_lags(row, wp);
      auto other = convolve_lags(row, wn);
      if (!add_left_tail(row, wp, rg, column_below, out) ||
          !add_left_tail(row, wn, rg, column_below, other)) {
        truncated = true;
      }
      for (std::size_t i = 0; i < N; ++i) out[i] += other[i];
    }
    for (std::size_t i = 0; i < N; ++i) columns[i * Nz + j] = out[i];
  }

  OperatorResult res{rg, std::vector<double>(N), Method::convolution, {}};
  std::vector<bool> flagged(N, false);
  for (std::size_t i = 0; i < N; ++i) {
    const std::span<const double> col(columns.data() + i * Nz, Nz);
    const auto zi = zbar_integral(col, zg);
    res.values[i] = zi.value;
    flagged[i] = zi.truncated;
  }
  const double peak = max_abs(res.values);
  for (std::size_t i = 0; i < N; ++i) {
    if (std::abs(res.values[i]) <= 1e-6 * peak) continue;
    if (flagged[i]) truncated = true;
    const double* col = columns.data() + i * Nz;
    const double corner = zg.node(1) * (std::abs(col[0]) + std::abs(col[1]));
    res.report.corner_fraction = std::max(res.report.corner_fraction, corner / std::abs(res.values[i]));
  }
  res.report.corner_flagged = res.report.corner_fraction > kCornerLimit;
  res.report.truncated = truncated;
  return res;
}

double trace_apply_direct(const std::function<double(double, double)>& f, double rho, int n,
                          double rbox, double zbox) {
  if (n < 1) fail(ErrorCode::invalid_argument, "dimension n must be >= 1");
  if (!(rho >= 0.0)) fail(ErrorCode::invalid_argument, "radius must be >= 0");
  if (!(rbox > 0.0) || !(zbox > 0.0)) fail(ErrorCode::invalid_argument, "support box must be positive");
  const double omega = n >= 2 ? unit_sphere_area(n - 1) : 1.0;
  const double sine_int = n >= 2 ? sine_power_integral(n - 2) : 0.0;

  // radial kernel: integral over the sphere of radius r of |x - y|^2 + z^2 to the -n/2
  auto radial_kernel = [&](double r, double z) {
    if (n == 1) return 1.0 / std::hypot(rho - r, z) + 1.0 / std::hypot(rho + r, z);
    if (rho == 0.0) {
      // r^{n-1} / |(r, z)|^n without forming either power
      const double len = std::hypot(r, z);
      return omega * sine_int * std::pow(r / len, n - 1) / len;
    }
    const double d = rho - r;
    const double j = quad::angular_integral(d * d + z * z, 4.0 * rho * r, n - 2, 0.5 * n, 1e-11).value;
    return omega * std::pow(r, n - 1) * j;
  };

  if (n >= 2 && rho > 0.0) {
    // Near (rho, 0) the reduced kernel grows like the inverse distance, so use polar
    // coordinates (t, phi) about that point; the Jacobian t cancels the growth.
    const double tmax = std::isinf(rbox) || std::isinf(zbox)
                            ? std::numeric_limits<double>::infinity()
                            : std::hypot(std::max(rho, rbox - rho), zbox);
    auto ring = [&](double t) {
      if (t < 1e-100) return 0.0;
      const double phimax = t <= rho ? std::numbers::pi : std::acos(-rho / t);
      auto g = [&](double phi) {
        const double r = rho + t * std::cos(phi);
        const double z = t * std::sin(phi);
        if (!(r > 0.0)) return 0.0;
        const double fv = f(r, z);
        if (fv == 0.0) return 0.0;
        if (t <= 1.0) {
          const double j = quad::angular_integral(t * t, 4.0 * rho * r, n - 2, 0.5 * n, 1e-12).value;
          return fv * omega * std::pow(r, n - 1) * j * t;
        }
        // far out r^{n-1} and t^{-n} overflow separately; the angular integral is
        // homogeneous of degree -n in (t, sqrt(c)), so only ratios enter
        const double j = quad::angular_integral(1.0, 4.0 * (rho / t) * (r / t), n - 2, 0.5 * n, 1e-12).value;
        return fv * omega * std::pow(r / t, n - 1) * j;
      };
      return quad::tanh_sinh(g, 0.0, phimax, kInnerTol).value;
    };
    double total = quad::tanh_sinh(ring, 0.0, std::min(rho, tmax), kDirectTol).value;
    if (tmax > rho) total += quad::tanh_sinh(ring, rho, tmax, kDirectTol).value;
    return total;
  }

  auto inner = [&](double z) {
    // the inner integral grows like log(1/z); below this the slab is negligible
    if (z < 1e-100) return 0.0;
    auto g = [&](double r) { return f(r, z) * radial_kernel(r, z); };
    double total = 0.0;
    if (rho > 0.0 && rho < rbox) {
      total += quad::tanh_sinh(g, 0.0, rho, kInnerTol).value;
      total += quad::tanh_sinh(g, rho, rbox, kInnerTol).value;
    } else {
      total += quad::tanh_sinh(g, 0.0, rbox, kInnerTol).value;
    }
    return total;
  };
  return quad::tanh_sinh(inner, 0.0, zbox, kDirectTol).value;
}

std::vector<double> trace_apply_direct(const HalfSpaceField& f, int n,
                                       std::span<const double> rhos) {
  std::vector<double> out;
  out.reserve(rhos.size());
  auto fn = [&f](double r, double z) { return f.value(r, z); };
  for (double rho : rhos) out.push_back(trace_apply_direct(fn, rho, n));
  return out;
}

}  // namespace radineq
