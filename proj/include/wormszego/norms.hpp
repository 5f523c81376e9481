#pragma once

// Boundary L^p norms, Bessel-potential Sobolev norms, Gagliardo seminorms,
// weighted L^2 norms and power-law fits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "transforms.hpp"

namespace wormszego {

enum class NormKind { lp, bessel_sobolev, gagliardo, weighted_l2 };

inline const char *to_string(NormKind k)
{
  switch (k) {
  case NormKind::lp: return "lp";
  case NormKind::bessel_sobolev: return "bessel_sobolev";
  case NormKind::gagliardo: return "gagliardo";
  default: return "weighted_l2";
  }
}

struct PowerFit
{
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
};

struct NormReport
{
  double value = 0.0;
  NormKind kind = NormKind::lp;
  double p = 2.0;
  double s = 0.0;
  double weight_exponent = 0.0;
  double range_lo = -std::numeric_limits<double>::infinity(); // integrated range, in the field's own variable
  double range_hi = std::numeric_limits<double>::infinity();
  bool divergent_by_truncation = false;
  // nested-truncation diagnostics, empty when not requested
  std::vector<double> ladder_params;
  std::vector<double> ladder_values;
  PowerFit growth;
};

// Least squares slope of log y against log x.
inline PowerFit fit_power_law(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw std::invalid_argument("fit_power_law: size mismatch");
  if (x.size() < 5)
    throw std::invalid_argument("fit_power_law needs at least 5 samples");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_power_law needs positive samples");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("fit_power_law needs distinct abscissae");
  PowerFit f;
  f.exponent = sxy / sxx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

inline void require_exponent(double p)
{
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("norm exponent must lie in [1, inf)");
}

// (sum_l w_l int int |f|^p d rho d theta)^{1/p}, d rho = e^x dx on the log grid.
inline NormReport lp_norm(const BoundaryField &f, double p, const WormParams &w)
{
  require_exponent(p);
  const Grid2 &g = f.grid;
  const double dx = g.x.dx(), dth = g.theta.dtheta();
  double total = 0.0;
  for (Sheet s : all_sheets) {
    const auto &sh = f.sheet(s);
    double acc = 0.0;
    for (std::size_t m = 0; m < g.theta.m_count; ++m)
      for (std::size_t k = 0; k < g.x.n; ++k)
        acc += std::pow(std::abs(sh.at(k, m)), p) * g.x.rho(k);
    total += measure_weight(s, w) * acc * dx * dth;
  }
  NormReport r;
  r.value = std::pow(total, 1.0 / p);
  r.kind = NormKind::lp;
  r.p = p;
  r.range_lo = g.x.rho(0);
  r.range_hi = g.x.rho(g.x.n - 1);
  return r;
}

// Boundary norm of d_b(D'_beta): sum_l w_l int int |f|^p dx d theta.
inline NormReport lp_norm_prime(const PrimeBoundaryField &f, double p, const WormParams &w)
{
  require_exponent(p);
  const Grid2 &g = f.grid;
  double total = 0.0;
  for (Sheet s : all_sheets) {
    double acc = 0.0;
    for (const auto &v : f.sheet(s).values)
      acc += std::pow(std::abs(v), p);
    total += measure_weight(s, w) * acc * g.x.dx() * g.theta.dtheta();
  }
  NormReport r;
  r.value = std::pow(total, 1.0 / p);
  r.p = p;
  r.range_lo = g.x.x_min;
  r.range_hi = g.x.x(g.x.n - 1);
  return r;
}

// Plain L^p norm against dx d theta.
inline double line_lp_norm(const LineField &f, double p)
{
  require_exponent(p);
  double acc = 0.0;
  for (const auto &v : f.values)
    acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.grid.x.dx() * f.grid.theta.dtheta(), 1.0 / p);
}

// || F^{-1}[(1 + xi^2 + j^2)^{s/2} F f] ||_{L^p(dx d theta)}
inline NormReport bessel_sobolev_norm(const LineField &f, double s, double p)
{
  if (!(s >= 0.0))
    throw std::invalid_argument("bessel_sobolev_norm needs s >= 0");
  if (!(p > 1.0))
    throw std::invalid_argument("bessel_sobolev_norm needs p in (1, inf)");
  NormReport r;
  r.kind = NormKind::bessel_sobolev;
  r.p = p;
  r.s = s;
  r.range_lo = f.grid.x.x_min;
  r.range_hi = f.grid.x.x(f.grid.x.n - 1);
  if (s == 0.0) {
    r.value = line_lp_norm(f, p);
    return r;
  }
  Spectrum sp = mf_forward(f);
  for (std::size_t jj = 0; jj < sp.grid.theta.m_count; ++jj) {
    const double j = sp.grid.theta.mode(jj);
    for (std::size_t q = 0; q < sp.grid.x.n; ++q) {
      const double xi = sp.grid.x.xi(q);
      sp.at(q, jj) *= std::pow(1.0 + xi * xi + j * j, s / 2.0);
    }
  }
  r.value = line_lp_norm(mf_inverse(sp), p);
  return r;
}

// Parseval route for p = 2: (2 pi)^{-2} sum_j int (1 + xi^2 + j^2)^s |F|^2 d xi.
inline double bessel_sobolev_norm_parseval(const LineField &f, double s)
{
  const Spectrum sp = mf_forward(f);
  double acc = 0.0;
  for (std::size_t jj = 0; jj < sp.grid.theta.m_count; ++jj) {
    const double j = sp.grid.theta.mode(jj);
    for (std::size_t q = 0; q < sp.grid.x.n; ++q) {
      const double xi = sp.grid.x.xi(q);
      acc += std::pow(1.0 + xi * xi + j * j, s) * std::norm(sp.at(q, jj));
    }
  }
  return std::sqrt(acc * sp.grid.x.dxi() / (4.0 * pi * pi));
}

// (int |g(xi)|^2 |xi|^{2s} d xi)^{1/2} over the FFT-ordered frequencies of the grid.
inline NormReport weighted_l2_norm(const LogGrid &g, std::span<const cplx> line, double two_s)
{
  if (!(two_s >= 0.0 && two_s < 1.0))
    throw std::invalid_argument("weighted_l2_norm needs 2s in [0, 1)");
  if (line.size() != g.n)
    throw std::invalid_argument("weighted_l2_norm: sample count does not match grid");
  double acc = 0.0;
  for (std::size_t q = 0; q < g.n; ++q) {
    const double xi = std::abs(g.xi(q));
    const double wgt = two_s == 0.0 ? 1.0 : std::pow(xi, two_s);
    acc += std::norm(line[q]) * wgt;
  }
  NormReport r;
  r.value = std::sqrt(acc * g.dxi());
  r.kind = NormKind::weighted_l2;
  r.p = 2.0;
  r.weight_exponent = two_s;
  return r;
}

// ---------------------------------------------------------------------------
// Gagliardo double integral on cells.
//
// Nodes t_i (increasing) own cells [e_i, e_{i+1}]. Pairs of cells are handled by
// distance:
//   same cell          |q|^p int int |x - y|^{p - 1 - sp}, q the minmod slope
//   adjacent cells     |difference quotient|^p int int |x - y|^{p - 1 - sp}
//   |i - j| < band     |f_i - f_j|^p int int |x - y|^{-1 - sp}, exact kernel
//   otherwise          midpoint rule
// The kernel integrals are done in closed form.

struct GagliardoCells
{
  std::vector<double> nodes;
  std::vector<double> edges; // nodes.size() + 1
  std::vector<cplx> values;
};

struct GagliardoSums
{
  double total = 0.0;
  // row_upper[i] = cell (i,i) + 2 sum_{j > i} (i,j); a suffix sum is the box [e_i, end]
  std::vector<double> row_upper;
  // col_lower[j] = cell (j,j) + 2 sum_{i < j} (i,j); a prefix sum is the box [start, e_{j+1}]
  std::vector<double> col_lower;
};

namespace detail {

// Phi'' = r^{-1-a}, used in the four-corner formula for separated cells.
inline double kernel_phi(double r, double a)
{
  if (a == 0.0)
    return r * std::log(r) - r;
  if (a == 1.0)
    return -std::log(r);
  return std::pow(r, 1.0 - a) / (-a * (1.0 - a));
}

// int_a^b int_c^d |x - y|^{-1-alpha} dy dx for b <= c
inline double separated_kernel(double a, double b, double c, double d, double alpha)
{
  return -kernel_phi(d - b, alpha) + kernel_phi(c - b, alpha) + kernel_phi(d - a, alpha) - kernel_phi(c - a, alpha);
}

// Psi'' = r^g with g > -1; Psi(0) = 0.
inline double power_psi(double r, double g)
{
  return r <= 0.0 ? 0.0 : std::pow(r, g + 2.0) / ((g + 1.0) * (g + 2.0));
}

// int_a^b int_b^d |x - y|^g dy dx
inline double touching_power(double a, double b, double d, double g)
{
  return -power_psi(d - b, g) + power_psi(d - a, g) - power_psi(b - a, g);
}

} // namespace detail

inline GagliardoSums gagliardo_sums(const GagliardoCells &c, double s, double p, std::size_t band = 8)
{
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("gagliardo seminorm needs s in (0, 1)");
  if (!(p > 1.0))
    throw std::invalid_argument("gagliardo seminorm needs p in (1, inf)");
  const std::size_t n = c.nodes.size();
  if (c.values.size() != n || c.edges.size() != n + 1 || n < 2)
    throw std::invalid_argument("gagliardo cells are inconsistent");
  const double alpha = s * p;
  const double g = p - 1.0 - alpha; // > -1 since s < 1
  band = std::max<std::size_t>(band, 2);

  const auto &t = c.nodes;
  const auto &e = c.edges;
  const auto &f = c.values;
  auto width = [&](std::size_t i) { return e[i + 1] - e[i]; };

  // minmod slope per cell
  std::vector<double> slope(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double l = i > 0 ? std::abs(f[i] - f[i - 1]) / (t[i] - t[i - 1]) : std::numeric_limits<double>::infinity();
    const double r = i + 1 < n ? std::abs(f[i + 1] - f[i]) / (t[i + 1] - t[i]) : std::numeric_limits<double>::infinity();
    slope[i] = std::min(l, r);
    if (!std::isfinite(slope[i]))
      slope[i] = 0.0;
  }

  // pair (i, j), i < j, single ordering
  auto pair = [&](std::size_t i, std::size_t j) {
    const double diff = std::abs(f[j] - f[i]);
    if (diff == 0.0)
      return 0.0;
    const std::size_t gap = j - i;
    if (gap == 1) {
      const double q = diff / (t[j] - t[i]);
      return std::pow(q, p) * detail::touching_power(e[i], e[i + 1], e[j + 1], g);
    }
    if (gap < band)
      return std::pow(diff, p) * detail::separated_kernel(e[i], e[i + 1], e[j], e[j + 1], alpha);
    return std::pow(diff, p) * std::pow(t[j] - t[i], -1.0 - alpha) * width(i) * width(j);
  };

  // row sums and column sums are filled by disjoint workers; no shared accumulation
  std::vector<double> diag(n), upper(n, 0.0), lower(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const double L = width(i);
    diag[i] = std::pow(slope[i], p) * 2.0 * std::pow(L, g + 2.0) / ((g + 1.0) * (g + 2.0));
    double acc = 0.0;
    for (std::size_t j = i + 1; j < n; ++j)
      acc += pair(i, j);
    upper[i] = acc;
    double acc2 = 0.0;
    for (std::size_t k = 0; k < i; ++k)
      acc2 += pair(k, i);
    lower[i] = acc2;
  });

  GagliardoSums out;
  out.row_upper.resize(n);
  out.col_lower.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.row_upper[i] = diag[i] + 2.0 * upper[i];
    out.col_lower[i] = diag[i] + 2.0 * lower[i];
    out.total += out.row_upper[i];
  }
  return out;
}

// Cells on the uniform x nodes of one angular line, restricted to [lo, hi].
inline GagliardoCells line_cells(const LogGrid &g, const cplx *line, double lo, double hi, std::size_t stride = 1)
{
  GagliardoCells c;
  const double h = g.dx() * static_cast<double>(stride);
  for (std::size_t k = 0; k < g.n; k += stride) {
    const double x = g.x(k);
    if (x < lo || x > hi)
      continue;
    c.nodes.push_back(x);
    c.values.push_back(line[k]);
  }
  if (c.nodes.size() < 2)
    throw std::invalid_argument("gagliardo range holds fewer than two nodes");
  for (double x : c.nodes)
    c.edges.push_back(x - h / 2.0);
  c.edges.push_back(c.nodes.back() + h / 2.0);
  return c;
}

// Cells in rho for a half-line line: nodes e^{x_k}, edges e^{x_k +- h/2}.
inline GagliardoCells half_line_cells(const LogGrid &g, const cplx *line, double x_lo, double x_hi, std::size_t stride = 1)
{
  GagliardoCells c = line_cells(g, line, x_lo, x_hi, stride);
  for (auto &x : c.nodes)
    x = std::exp(x);
  for (auto &x : c.edges)
    x = std::exp(x);
  return c;
}

// [f]_{s,p} = int int |f(x) - f(y)|^p / |x - y|^{1+sp} dx dy along x for each
// angular line over [lo, hi], summed with d theta.
inline NormReport gagliardo_seminorm(const LineField &f, double s, double p, double lo, double hi)
{
  double total = 0.0;
  for (std::size_t m = 0; m < f.grid.theta.m_count; ++m)
    total += gagliardo_sums(line_cells(f.grid.x, f.line(m), lo, hi), s, p).total;
  NormReport r;
  r.value = total * f.grid.theta.dtheta();
  r.kind = NormKind::gagliardo;
  r.p = p;
  r.s = s;
  r.range_lo = lo;
  r.range_hi = hi;
  return r;
}

// One-dimensional version on plain samples over a uniform grid of spacing h.
inline double gagliardo_1d(std::span<const double> x, std::span<const cplx> v, double s, double p)
{
  if (x.size() != v.size() || x.size() < 2)
    throw std::invalid_argument("gagliardo_1d: bad samples");
  const double h = x[1] - x[0];
  GagliardoCells c;
  c.nodes.assign(x.begin(), x.end());
  c.values.assign(v.begin(), v.end());
  for (double t : c.nodes)
    c.edges.push_back(t - h / 2.0);
  c.edges.push_back(c.nodes.back() + h / 2.0);
  return gagliardo_sums(c, s, p).total;
}

} // namespace wormszego
