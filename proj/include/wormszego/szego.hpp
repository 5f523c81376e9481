#pragma once

// Operator assembly: block operators P_{k,l}, the projection P, the truncated
// sinh-kernel (Calderon-Zygmund) operators and the model operators P_a, Q_a.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fft.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "multipliers.hpp"
#include "parallel.hpp"
#include "transforms.hpp"

namespace wormszego {

// Mellin-Fourier multiplier operator T_m = C_2^{-1} T_{m} C_2 on one sheet.
inline HalfLineField apply_multiplier(const MultiplierTable &m, const HalfLineField &f)
{
  require_same_grid(m.grid, f.grid, "apply_multiplier");
  Spectrum s = mf_forward(cayley(2.0, f));
  for (std::size_t i = 0; i < s.values.size(); ++i)
    s.values[i] *= m.values[i];
  return cayley_inverse(2.0, mf_inverse(s));
}

// Restrict to sheet l, transform, multiply by the (k,l) symbol, invert, deposit on sheet k.
inline BoundaryField apply_block(int k, int l, const BoundaryField &f, const WormParams &w,
                                 BlockNormalization norm = BlockNormalization::measure_normalized)
{
  const Sheet target = sheet_from_number(k);
  const Sheet source = sheet_from_number(l);
  for (const auto &sh : f.sheets)
    require_same_grid(f.grid, sh.grid, "apply_block");
  BoundaryField out(f.grid);
  out.sheet(target) = apply_multiplier(block_symbol(k, l, w, f.grid, norm), f.sheet(source));
  return out;
}

// P f = sum_{k,l} P_{k,l} f. Each source sheet is transformed once; the
// per-target sum runs over l = 1..4 in that order.
inline BoundaryField apply_szego(const BoundaryField &f, const WormParams &w,
                                 BlockNormalization norm = BlockNormalization::measure_normalized)
{
  for (const auto &sh : f.sheets)
    require_same_grid(f.grid, sh.grid, "apply_szego");
  std::array<Spectrum, 4> spectra;
  parallel_for(4, [&](std::size_t l) { spectra[l] = mf_forward(cayley(2.0, f.sheets[l])); });

  const Grid2 &g = f.grid;
  const std::size_t n = g.x.n;
  std::array<double, 4> factor{};
  for (int l = 1; l <= 4; ++l)
    factor[l - 1] = block_normalization_factor(l, norm, w);

  BoundaryField out(g);
  parallel_for(4, [&](std::size_t ki) {
    const int k = static_cast<int>(ki) + 1;
    Spectrum acc(g);
    for (std::size_t jj = 0; jj < g.theta.m_count; ++jj) {
      const int j = g.theta.mode(jj);
      for (std::size_t q = 0; q < n; ++q) {
        const double xi = g.x.xi(q);
        cplx sum{};
        for (int l = 1; l <= 4; ++l)
          sum += factor[l - 1] * block_symbol_value(k, l, xi, j, w) * spectra[l - 1].at(q, jj);
        acc.at(q, jj) = sum;
      }
    }
    out.sheets[ki] = cayley_inverse(2.0, mf_inverse(acc));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Truncated sinh-kernel operators

struct TruncationWindow
{
  double eps; // inner cut, in units of pi t / (2a)
  double R;   // outer cut, same units
};

inline TruncationWindow make_window(double eps, double R)
{
  if (!(eps > 0.0) || !(R > eps))
    throw std::invalid_argument("truncation window needs 0 < eps < R");
  return {eps, R};
}

// Tap weights W_m, m >= 1, of the product-integration rule
//   int_{window} g(x - t) / sinh(pi t/(2a)) dt  ~=  sum_{m>=1} W_m (g(x - m dx) - g(x + m dx)),
// exact for g piecewise linear between nodes. The m = 0 tap vanishes by oddness.
inline std::vector<double> truncated_cz_taps(double a, const TruncationWindow &win, double dx, std::size_t max_taps)
{
  require_model_parameter(a);
  const double c = pi / (2.0 * a);
  const double t_lo = win.eps / std::abs(c);
  const double t_hi = win.R / std::abs(c);
  const std::size_t taps = std::min<std::size_t>(max_taps, static_cast<std::size_t>(std::ceil(t_hi / dx)) + 1);
  std::vector<double> W(taps + 1, 0.0);
  using quad = boost::math::quadrature::gauss<double, 20>;
  // segment s covers [s dx, (s+1) dx]; hats m = s and m = s + 1 overlap it
  for (std::size_t s = 0; s < taps; ++s) {
    const double lo = std::max(t_lo, static_cast<double>(s) * dx);
    const double hi = std::min(t_hi, static_cast<double>(s + 1) * dx);
    if (!(hi > lo))
      continue;
    const double left = static_cast<double>(s) * dx;
    const double down = quad::integrate([&](double t) { return (1.0 - (t - left) / dx) / std::sinh(c * t); }, lo, hi);
    const double up = quad::integrate([&](double t) { return ((t - left) / dx) / std::sinh(c * t); }, lo, hi);
    if (s >= 1)
      W[s] += down;
    if (s + 1 <= taps)
      W[s + 1] += up;
  }
  return W;
}

namespace detail {

// Linear (zero-extended) odd convolution of one line with the taps, via FFT.
inline std::vector<cplx> odd_convolve(std::span<const cplx> g, const std::vector<double> &W)
{
  const std::size_t n = g.size();
  const std::size_t taps = std::min(W.size() - 1, n);
  std::size_t L = 1;
  while (L < n + taps + 1)
    L <<= 1;
  std::vector<cplx> sig(L, cplx{}), ker(L, cplx{});
  std::copy(g.begin(), g.end(), sig.begin());
  for (std::size_t m = 1; m <= taps; ++m) {
    ker[m] = W[m];
    ker[L - m] = -W[m];
  }
  fft::transform(sig, fft::Sign::negative);
  fft::transform(ker, fft::Sign::negative);
  for (std::size_t i = 0; i < L; ++i)
    sig[i] *= ker[i];
  fft::transform(sig, fft::Sign::positive);
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = sig[i] / static_cast<double>(L);
  return out;
}

} // namespace detail

// T_{a,0,(eps,R)} g (x) = int_{eps < |pi t/(2a)| < R} g(x - t) / sinh(pi t/(2a)) dt
inline LineField truncated_cz(double a, const TruncationWindow &win, const LineField &g)
{
  const auto W = truncated_cz_taps(a, win, g.grid.x.dx(), g.grid.x.n);
  LineField out(g.grid);
  parallel_for(g.grid.theta.m_count, [&](std::size_t m) {
    const auto res = detail::odd_convolve(std::span<const cplx>(g.line(m), g.grid.x.n), W);
    std::copy(res.begin(), res.end(), out.line(m));
  });
  return out;
}

// Fourier symbol of the truncated operator,
// -2i int_{t_eps}^{t_R} sin(xi t) / sinh(pi t/(2a)) dt (the integrand is regular at 0).
inline cplx truncated_cz_symbol(double a, const TruncationWindow &win, double xi)
{
  require_model_parameter(a);
  const double c = pi / (2.0 * a);
  const double t_lo = win.eps / std::abs(c);
  // beyond 60/|c| the kernel is below e^{-60}
  const double t_hi = std::min(win.R / std::abs(c), 60.0 / std::abs(c));
  if (!(t_hi > t_lo))
    return {};
  using quad = boost::math::quadrature::gauss<double, 20>;
  const double period = 2.0 * pi / std::max(std::abs(xi), 1e-12);
  const double panel = std::min(period / 2.0, 0.25 / std::abs(c));
  double sum = 0.0;
  // the first panels are graded toward t_lo where 1/sinh varies fastest
  double lo = t_lo;
  while (lo < t_hi) {
    const double hi = std::min(t_hi, std::max(lo + panel * 1e-3, std::min(lo * 2.0, lo + panel)));
    sum += quad::integrate([&](double t) { return std::sin(xi * t) / std::sinh(c * t); }, lo, hi);
    lo = hi;
  }
  return cplx{0.0, -2.0 * sum};
}

// L^2 operator norm of the truncated convolution: sup over xi of |symbol|.
// The symbol is odd in xi, so xi > 0 suffices; scanned on (0, xi_max] then refined.
inline double truncated_cz_l2_norm(double a, const TruncationWindow &win, double xi_max = 60.0, std::size_t samples = 600)
{
  double best = 0.0, best_xi = 0.0;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double xi = xi_max * std::pow(static_cast<double>(i) / static_cast<double>(samples), 2.0);
    const double v = std::abs(truncated_cz_symbol(a, win, xi));
    if (v > best) {
      best = v;
      best_xi = xi;
    }
  }
  // golden-section refinement around the best sample
  double lo = best_xi * 0.8, hi = best_xi * 1.25;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    if (std::abs(truncated_cz_symbol(a, win, x1)) > std::abs(truncated_cz_symbol(a, win, x2)))
      hi = x2;
    else
      lo = x1;
  }
  return std::max(best, std::abs(truncated_cz_symbol(a, win, 0.5 * (lo + hi))));
}

// ---------------------------------------------------------------------------
// Model operators on R^+ x T. Fields here live on rho > 0, so the cut-offs
// chi_+ on either side are the identity on the grid.

inline HalfLineField apply_line_symbol(const HalfLineField &f, const std::function<cplx(double, int)> &symbol)
{
  Spectrum s = mf_forward(cayley(2.0, f));
  const std::size_t n = s.grid.x.n;
  for (std::size_t jj = 0; jj < s.grid.theta.m_count; ++jj) {
    const int j = s.grid.theta.mode(jj);
    for (std::size_t q = 0; q < n; ++q)
      s.at(q, jj) *= symbol(s.grid.x.xi(q), j);
  }
  return cayley_inverse(2.0, mf_inverse(s));
}

// Lambda_a = chi_+ C_2^{-1} T_{a,0} C_2 chi_+ through the exact limit symbol.
inline HalfLineField lambda_a(double a, const HalfLineField &f)
{
  require_model_parameter(a);
  return apply_line_symbol(f, [a](double xi, int) { return tanh_symbol(a, 0.0, xi); });
}

// Same operator from the truncated quadrature, for cross-validation.
inline HalfLineField lambda_a_truncated(double a, const TruncationWindow &win, const HalfLineField &f)
{
  return cayley_inverse(2.0, truncated_cz(a, win, cayley(2.0, f)));
}

// P_a = Lambda_+/2 - Lambda_a/(4|a|i), the sign matching tanh_symbol above:
// the symbol is 1/2 + tanh(a xi)/2 = m_a.
inline HalfLineField p_a(double a, const HalfLineField &f)
{
  require_model_parameter(a);
  const HalfLineField la = lambda_a(a, f);
  HalfLineField out(f.grid);
  const cplx coef = -1.0 / cplx{0.0, 4.0 * std::abs(a)};
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = 0.5 * f.values[i] + coef * la.values[i];
  return out;
}

inline HalfLineField p_a_direct(double a, const HalfLineField &f)
{
  require_model_parameter(a);
  return apply_line_symbol(f, [a](double xi, int) { return cplx{model_symbol_ma(a, xi), 0.0}; });
}

inline HalfLineField q_a(double a, const HalfLineField &f)
{
  require_model_parameter(a);
  return apply_line_symbol(f, [a](double xi, int j) { return cplx{model_symbol_Ma(a, xi, j), 0.0}; });
}

// Q_a mode by mode: for each angular mode j the shift xi -> xi - (j/2 + 1/4)
// becomes the modulation rho^{i(j/2+1/4)} around the unshifted m_a multiplier.
inline HalfLineField q_a_mode_shifted(double a, const HalfLineField &f)
{
  require_model_parameter(a);
  const Grid2 &g = f.grid;
  const std::size_t n = g.x.n, M = g.theta.m_count;
  const LineField line = cayley(2.0, f);
  const auto fwd = detail::angular_twiddles(g.theta, -1.0);
  const auto inv = detail::angular_twiddles(g.theta, +1.0);

  std::vector<std::vector<cplx>> modes(M, std::vector<cplx>(n));
  for (std::size_t jj = 0; jj < M; ++jj)
    for (std::size_t m = 0; m < M; ++m) {
      const cplx tw = g.theta.dtheta() * fwd[jj * M + m];
      for (std::size_t q = 0; q < n; ++q)
        modes[jj][q] += tw * line.at(q, m);
    }

  parallel_for(M, [&](std::size_t jj) {
    const double shift = 0.5 * g.theta.mode(jj) + 0.25;
    auto &h = modes[jj];
    for (std::size_t q = 0; q < n; ++q)
      h[q] *= std::polar(1.0, -shift * g.x.x(q));
    auto spec = line_forward(g.x, h);
    for (std::size_t q = 0; q < n; ++q)
      spec[q] *= model_symbol_ma(a, g.x.xi(q));
    h = line_inverse(g.x, spec);
    const double lift = std::exp(a / 4.0);
    for (std::size_t q = 0; q < n; ++q)
      h[q] *= lift * std::polar(1.0, shift * g.x.x(q));
  });

  LineField out(g);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t jj = 0; jj < M; ++jj) {
      const cplx tw = inv[jj * M + m] / (2.0 * pi);
      for (std::size_t q = 0; q < n; ++q)
        out.at(q, m) += tw * modes[jj][q];
    }
  return cayley_inverse(2.0, out);
}

// Applies T_{mA} T_{mB} and T_{mA mB}; returns both.
inline std::pair<HalfLineField, HalfLineField> compose_multipliers(const MultiplierTable &mA, const MultiplierTable &mB,
                                                                   const HalfLineField &f)
{
  require_same_grid(mA.grid, mB.grid, "compose_multipliers");
  MultiplierTable prod{mA.grid, std::vector<cplx>(mA.values.size()), mA.provenance + "*" + mB.provenance, 0.0};
  for (std::size_t i = 0; i < prod.values.size(); ++i) {
    prod.values[i] = mA.values[i] * mB.values[i];
    prod.sup = std::max(prod.sup, std::abs(prod.values[i]));
  }
  return {apply_multiplier(mA, apply_multiplier(mB, f)), apply_multiplier(prod, f)};
}

} // namespace wormszego
