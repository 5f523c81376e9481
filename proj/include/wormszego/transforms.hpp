#pragma once

// Mellin-Fourier machinery on R^+ x T.
//
// The radial Mellin transform is realized as C_p (phi -> e^{x/p} phi(e^x))
// followed by a Fourier transform on the log line. Conventions:
//
//   F(xi, j) = int int f(x, theta) e^{-i(x xi + j theta)} dx dtheta
//   f(x, theta) = (2 pi)^{-2} sum_j int F(xi, j) e^{i(x xi + j theta)} dxi
//
// discretized with the periodic rectangle rule on the grids, so that
// mf_inverse(mf_forward(f)) == f up to rounding and Plancherel holds exactly in
// the discrete sense.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"
#include "parallel.hpp"

namespace wormszego {

// One-dimensional transform along x: F(xi_k) = dx sum_m f(x_m) e^{-i xi_k x_m}.
inline std::vector<cplx> line_forward(const LogGrid &g, std::span<const cplx> f)
{
  if (f.size() != g.n)
    throw std::invalid_argument("line_forward: sample count does not match grid");
  std::vector<cplx> out(f.begin(), f.end());
  fft::transform(out, fft::Sign::negative);
  const double dx = g.dx();
  for (std::size_t k = 0; k < g.n; ++k)
    out[k] *= dx * std::polar(1.0, -g.xi(k) * g.x_min);
  return out;
}

// f(x_m) = (1/2pi) sum_k F(xi_k) e^{i xi_k x_m} dxi.
inline std::vector<cplx> line_inverse(const LogGrid &g, std::span<const cplx> spec)
{
  if (spec.size() != g.n)
    throw std::invalid_argument("line_inverse: sample count does not match grid");
  std::vector<cplx> out(g.n);
  for (std::size_t k = 0; k < g.n; ++k)
    out[k] = spec[k] * std::polar(1.0, g.xi(k) * g.x_min);
  fft::transform(out, fft::Sign::positive);
  const double scale = g.dxi() / (2.0 * pi);
  for (auto &v : out)
    v *= scale;
  return out;
}

template<typename Tag>
bool decays_at_edges(const SampledField<Tag> &f, double rel = 1e-12)
{
  double peak = 0.0, edge = 0.0;
  const std::size_t n = f.grid.x.n;
  for (std::size_t m = 0; m < f.grid.theta.m_count; ++m) {
    const cplx *l = f.line(m);
    for (std::size_t k = 0; k < n; ++k)
      peak = std::max(peak, std::abs(l[k]));
    edge = std::max({edge, std::abs(l[0]), std::abs(l[n - 1])});
  }
  return edge <= rel * peak;
}

// (C_p phi)(x, theta) = e^{x/p} phi(e^x, theta)
inline LineField cayley(double p, const HalfLineField &phi)
{
  if (!(p > 1.0))
    throw std::invalid_argument("cayley needs p in (1, inf)");
  LineField g(phi.grid);
  const std::size_t n = phi.grid.x.n;
  std::vector<double> factor(n);
  for (std::size_t k = 0; k < n; ++k)
    factor[k] = std::exp(phi.grid.x.x(k) / p);
  for (std::size_t m = 0; m < phi.grid.theta.m_count; ++m)
    for (std::size_t k = 0; k < n; ++k)
      g.at(k, m) = factor[k] * phi.at(k, m);
  return g;
}

// phi(rho, theta) = rho^{-1/p} g(log rho, theta)
inline HalfLineField cayley_inverse(double p, const LineField &g)
{
  if (!(p > 1.0))
    throw std::invalid_argument("cayley_inverse needs p in (1, inf)");
  HalfLineField phi(g.grid);
  const std::size_t n = g.grid.x.n;
  std::vector<double> factor(n);
  for (std::size_t k = 0; k < n; ++k)
    factor[k] = std::exp(-g.grid.x.x(k) / p);
  for (std::size_t m = 0; m < g.grid.theta.m_count; ++m)
    for (std::size_t k = 0; k < n; ++k)
      phi.at(k, m) = factor[k] * g.at(k, m);
  return phi;
}

namespace detail {

// table[jj * M + m] = e^{sign * i j theta_m}
inline std::vector<cplx> angular_twiddles(const AngularGrid &a, double sign)
{
  const std::size_t M = a.m_count;
  std::vector<cplx> t(M * M);
  for (std::size_t jj = 0; jj < M; ++jj)
    for (std::size_t m = 0; m < M; ++m) {
      // exact reduction of j*m mod M keeps the table symmetric to the last bit
      const long long jm = static_cast<long long>(a.mode(jj)) * static_cast<long long>(m);
      const long long r = ((jm % static_cast<long long>(M)) + static_cast<long long>(M)) % static_cast<long long>(M);
      t[jj * M + m] = std::polar(1.0, sign * 2.0 * pi * static_cast<double>(r) / static_cast<double>(M));
    }
  return t;
}

} // namespace detail

inline Spectrum mf_forward(const LineField &f)
{
  const LogGrid &xg = f.grid.x;
  const AngularGrid &ag = f.grid.theta;
  const std::size_t n = xg.n, M = ag.m_count;

  std::vector<std::vector<cplx>> lines(M);
  parallel_for(M, [&](std::size_t m) { lines[m] = line_forward(xg, std::span<const cplx>(f.line(m), n)); });

  Spectrum out(f.grid);
  out.truncation_warning = !decays_at_edges(f);
  const auto tw = detail::angular_twiddles(ag, -1.0);
  const double dtheta = ag.dtheta();
  for (std::size_t jj = 0; jj < M; ++jj) {
    cplx *dst = out.mode_line(jj);
    for (std::size_t m = 0; m < M; ++m) {
      const cplx w = dtheta * tw[jj * M + m];
      const cplx *src = lines[m].data();
      for (std::size_t k = 0; k < n; ++k)
        dst[k] += w * src[k];
    }
  }
  return out;
}

inline LineField mf_inverse(const Spectrum &s)
{
  const LogGrid &xg = s.grid.x;
  const AngularGrid &ag = s.grid.theta;
  const std::size_t n = xg.n, M = ag.m_count;

  std::vector<std::vector<cplx>> lines(M);
  parallel_for(M, [&](std::size_t jj) { lines[jj] = line_inverse(xg, std::span<const cplx>(s.mode_line(jj), n)); });

  LineField out(s.grid);
  const auto tw = detail::angular_twiddles(ag, +1.0);
  const double norm = 1.0 / (2.0 * pi);
  for (std::size_t m = 0; m < M; ++m) {
    cplx *dst = out.line(m);
    for (std::size_t jj = 0; jj < M; ++jj) {
      const cplx w = norm * tw[jj * M + m];
      const cplx *src = lines[jj].data();
      for (std::size_t k = 0; k < n; ++k)
        dst[k] += w * src[k];
    }
  }
  return out;
}

// Hilbert transform in the first variable: multiplier -i sgn(xi), sgn(0) = 0.
inline LineField hilbert1(const LineField &f)
{
  const LogGrid &xg = f.grid.x;
  const std::size_t n = xg.n;
  LineField out(f.grid);
  parallel_for(f.grid.theta.m_count, [&](std::size_t m) {
    auto spec = line_forward(xg, std::span<const cplx>(f.line(m), n));
    for (std::size_t k = 0; k < n; ++k) {
      const double xi = xg.xi(k);
      spec[k] *= xi > 0.0 ? cplx{0.0, -1.0} : (xi < 0.0 ? cplx{0.0, 1.0} : cplx{});
    }
    const auto back = line_inverse(xg, spec);
    std::copy(back.begin(), back.end(), out.line(m));
  });
  return out;
}

} // namespace wormszego
