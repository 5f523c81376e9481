#pragma once

// Closed-form symbols: the (mu, eta) table, D(z, j), the sixteen block symbols,
// the model symbols m_a, M_a, the sinh-kernel symbol, plus the strip-shift probe.
//
// Every symbol is evaluated through its logarithm. e^{mu xi} / cosh(pi xi)
// stays bounded while numerator and denominator overflow near |xi| ~ 230.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "grid.hpp"
#include "transforms.hpp"

namespace wormszego {

struct MuEta
{
  double mu;
  double eta;
};

// Nine-case table; symmetric under (k, l) -> (l, k).
inline MuEta mu_eta(int k, int l, const WormParams &w)
{
  sheet_from_number(k);
  sheet_from_number(l);
  const double e = w.aperture();
  if (k == l) {
    switch (k) {
    case 1: return {-pi, -e};
    case 2: return {pi, -e};
    case 3: return {pi, e};
    default: return {-pi, e};
    }
  }
  const int a = std::min(k, l), b = std::max(k, l);
  if (a == 1 && b == 2) return {0.0, -e};
  if (a == 3 && b == 4) return {0.0, e};
  if (a == 1 && b == 4) return {-pi, 0.0};
  if (a == 2 && b == 3) return {pi, 0.0};
  return {0.0, 0.0}; // (1,3), (2,4)
}

struct StripSpec
{
  double lower;
  double upper;
  double center = 0.5;
  bool contains(double c) const { return c > lower && c < upper; }
};

inline StripSpec make_strip(const WormParams &w) { return {(1.0 - w.nu) / 2.0, (1.0 + w.nu) / 2.0, 0.5}; }

inline double log_cosh(double y)
{
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// Principal-value-free log cosh for complex arguments (branch is irrelevant:
// only exp of sums of these is ever taken).
inline cplx log_cosh(cplx y)
{
  const double a = y.real(), b = y.imag();
  const double s = a >= 0.0 ? 1.0 : -1.0;
  const cplx tail = std::polar(1.0, s * b) + std::exp(-2.0 * std::abs(a)) * std::polar(1.0, -s * b);
  return std::abs(a) - std::log(2.0) + std::log(tail);
}

// D(z, j) = 4 cosh[i pi (z - 1/2)] cosh[i (2 beta - pi)(z - 1/2 + i(j/2 + 1/4))]
inline cplx d_factor(cplx z, int j, const WormParams &w)
{
  const cplx I{0.0, 1.0};
  const cplx u = z - 0.5;
  return 4.0 * std::cosh(I * pi * u) * std::cosh(I * w.aperture() * (u + I * (0.5 * j + 0.25)));
}

// log m~_{k,l}(xi, j) on the critical line z = 1/2 - i xi (real valued):
// mu xi + eta (xi - j/2) - log 4 - log cosh(pi xi) - log cosh(e (xi - j/2 - 1/4))
inline double block_log_symbol(int k, int l, double xi, int j, const WormParams &w)
{
  const auto [mu, eta] = mu_eta(k, l, w);
  const double shifted = xi - 0.5 * j;
  return mu * xi + eta * shifted - std::log(4.0) - log_cosh(pi * xi) - log_cosh(w.aperture() * (shifted - 0.25));
}

inline double block_symbol_value(int k, int l, double xi, int j, const WormParams &w)
{
  return std::exp(block_log_symbol(k, l, xi, j, w));
}

// m_{k,l}(z, j) off the critical line, for the contour-shift probe.
inline cplx block_symbol_at(int k, int l, cplx z, int j, const WormParams &w)
{
  const auto [mu, eta] = mu_eta(k, l, w);
  const cplx I{0.0, 1.0};
  const cplx u = z - 0.5;
  const cplx lg = I * mu * u + I * eta * (u + I * (0.5 * j)) - std::log(4.0) - log_cosh(I * pi * u) -
                  log_cosh(I * w.aperture() * (u + I * (0.5 * j + 0.25)));
  return std::exp(lg);
}

// as_published: the table exactly as tabulated.
// measure_normalized: times the d sigma weight of the source sheet l, which is
// what makes the 16-block sum an orthogonal projection of L^2(d sigma).
enum class BlockNormalization { measure_normalized, as_published };

inline double block_normalization_factor(int l, BlockNormalization norm, const WormParams &w)
{
  return norm == BlockNormalization::measure_normalized ? measure_weight(sheet_from_number(l), w) : 1.0;
}

struct MultiplierTable
{
  Grid2 grid;
  std::vector<cplx> values; // [jj * n + k], same layout as Spectrum
  std::string provenance;
  double sup = 0.0;

  const cplx &at(std::size_t k, std::size_t jj) const { return values[jj * grid.x.n + k]; }
};

inline MultiplierTable make_table(const Grid2 &g, std::string provenance, const std::function<cplx(double, int)> &symbol)
{
  MultiplierTable t{g, std::vector<cplx>(g.size()), std::move(provenance), 0.0};
  const std::size_t n = g.x.n;
  for (std::size_t jj = 0; jj < g.theta.m_count; ++jj) {
    const int j = g.theta.mode(jj);
    for (std::size_t k = 0; k < n; ++k) {
      const cplx v = symbol(g.x.xi(k), j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("non-finite multiplier value in " + t.provenance);
      t.values[jj * n + k] = v;
      t.sup = std::max(t.sup, std::abs(v));
    }
  }
  return t;
}

inline MultiplierTable block_symbol(int k, int l, const WormParams &w, const Grid2 &g,
                                    BlockNormalization norm = BlockNormalization::as_published)
{
  const double factor = block_normalization_factor(l, norm, w);
  return make_table(g, "block(" + std::to_string(k) + "," + std::to_string(l) + ")",
                    [&](double xi, int j) { return cplx{factor * block_symbol_value(k, l, xi, j, w), 0.0}; });
}

inline void require_model_parameter(double a)
{
  if (!(std::abs(a) >= pi) || !std::isfinite(a))
    throw std::invalid_argument("model symbols need |a| >= pi");
}

// m_a(xi) = e^{a xi} / (2 cosh(a xi)) = (1 + tanh(a xi)) / 2
inline double model_symbol_ma(double a, double xi)
{
  require_model_parameter(a);
  return 0.5 * (1.0 + std::tanh(a * xi));
}

// M_a(xi, j) = e^{a/4} m_a(xi - j/2 - 1/4)
inline double model_symbol_Ma(double a, double xi, int j)
{
  return std::exp(a / 4.0) * model_symbol_ma(a, xi - 0.5 * j - 0.25);
}

// Fourier transform of the principal-value distribution
// g -> lim int_{eps < |pi t/(2a)|} e^{-kappa t} g(t) / sinh(pi t/(2a)) dt,
// i.e. -2|a| i tanh(a(xi - i kappa)) with F g(xi) = int g e^{-i t xi} dt.
inline cplx tanh_symbol(double a, double kappa, double xi)
{
  require_model_parameter(a);
  if (!(kappa >= 0.0 && kappa < pi / (2.0 * std::abs(a))))
    throw std::invalid_argument("tanh_symbol needs 0 <= kappa < pi/(2|a|)");
  return cplx{0.0, -2.0 * std::abs(a)} * std::tanh(a * cplx{xi, -kappa});
}

namespace detail {

// C_{1/c}^{-1} T_{m_{k,l}(c - i., .)} C_{1/c} phi
inline HalfLineField contour_apply(int k, int l, const HalfLineField &phi, double c, const WormParams &w)
{
  const double p = 1.0 / c;
  Spectrum s = mf_forward(cayley(p, phi));
  const std::size_t n = s.grid.x.n;
  for (std::size_t jj = 0; jj < s.grid.theta.m_count; ++jj) {
    const int j = s.grid.theta.mode(jj);
    for (std::size_t q = 0; q < n; ++q)
      s.at(q, jj) *= block_symbol_at(k, l, cplx{c, -s.grid.x.xi(q)}, j, w);
  }
  return cayley_inverse(p, mf_inverse(s));
}

} // namespace detail

// Evaluates the block operator along Re z = c and returns the sup difference,
// relative to the sup of the Re z = 1/2 evaluation, over nodes with |log rho| <= window.
inline double strip_shift_check(int k, int l, const HalfLineField &phi, double c, const WormParams &w,
                                double window = 20.0)
{
  const StripSpec strip = make_strip(w);
  if (!strip.contains(c))
    throw std::invalid_argument("strip_shift_check: c outside the admissible strip");
  const HalfLineField ref = detail::contour_apply(k, l, phi, 0.5, w);
  if (c == 0.5)
    return 0.0;
  const HalfLineField alt = detail::contour_apply(k, l, phi, c, w);
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < phi.grid.theta.m_count; ++m)
    for (std::size_t q = 0; q < phi.grid.x.n; ++q) {
      if (std::abs(phi.grid.x.x(q)) > window)
        continue;
      num = std::max(num, std::abs(alt.at(q, m) - ref.at(q, m)));
      den = std::max(den, std::abs(ref.at(q, m)));
    }
  return den > 0.0 ? num / den : num;
}

} // namespace wormszego
