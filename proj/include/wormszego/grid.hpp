#pragma once

// Sampling grids and the sampled containers: fields on one sheet, fields on all
// four sheets, and Mellin-Fourier spectra.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace wormszego {

// Uniform grid on the log line x = log rho; nodes x_k = x_min + k dx, k < n.
struct LogGrid
{
  double x_min = -30.0;
  double x_max = 30.0;
  std::size_t n = 1u << 16;

  double dx() const { return (x_max - x_min) / static_cast<double>(n); }
  double x(std::size_t k) const { return x_min + static_cast<double>(k) * dx(); }
  double rho(std::size_t k) const { return std::exp(x(k)); }
  double dxi() const { return 2.0 * pi / (x_max - x_min); }
  // FFT ordering: k < n/2 non-negative, the rest negative
  double xi(std::size_t k) const
  {
    const auto kk = static_cast<long long>(k);
    const auto nn = static_cast<long long>(n);
    return dxi() * static_cast<double>(kk < nn / 2 ? kk : kk - nn);
  }

  bool operator==(const LogGrid &) const = default;
};

inline LogGrid make_log_grid(double x_min, double x_max, std::size_t n)
{
  if (!(x_min < x_max))
    throw std::invalid_argument("log grid needs x_min < x_max");
  if (n < 8)
    throw std::invalid_argument("log grid needs n >= 8");
  return {x_min, x_max, n};
}

// theta_m = 2 pi m / M; modes j = -M/2 .. M/2 - 1 stored in that order.
struct AngularGrid
{
  std::size_t m_count = 16;

  double theta(std::size_t m) const { return 2.0 * pi * static_cast<double>(m) / static_cast<double>(m_count); }
  double dtheta() const { return 2.0 * pi / static_cast<double>(m_count); }
  int mode(std::size_t jj) const { return static_cast<int>(jj) - static_cast<int>(m_count / 2); }
  std::size_t mode_slot(int j) const
  {
    const int jj = j + static_cast<int>(m_count / 2);
    if (jj < 0 || jj >= static_cast<int>(m_count))
      throw std::out_of_range("angular mode " + std::to_string(j) + " not represented");
    return static_cast<std::size_t>(jj);
  }

  bool operator==(const AngularGrid &) const = default;
};

inline AngularGrid make_angular_grid(std::size_t m_count)
{
  if (m_count < 2 || m_count % 2 != 0)
    throw std::invalid_argument("angular grid needs an even M >= 2");
  return {m_count};
}

struct Grid2
{
  LogGrid x;
  AngularGrid theta;
  std::size_t size() const { return x.n * theta.m_count; }
  bool operator==(const Grid2 &) const = default;
};

inline void require_same_grid(const Grid2 &a, const Grid2 &b, const char *what)
{
  if (!(a == b))
    throw std::invalid_argument(std::string("grid mismatch in ") + what);
}

struct half_line_tag {}; // samples of phi(rho_k, theta_m)
struct line_tag {};      // samples of g(x_k, theta_m)

// Samples on one sheet. Storage is angle-major: each angular node owns a
// contiguous run of n values along x.
template<typename Tag>
struct SampledField
{
  Grid2 grid;
  std::vector<cplx> values;

  SampledField() = default;
  explicit SampledField(const Grid2 &g) : grid(g), values(g.size(), cplx{}) {}

  cplx &at(std::size_t k, std::size_t m) { return values[m * grid.x.n + k]; }
  const cplx &at(std::size_t k, std::size_t m) const { return values[m * grid.x.n + k]; }
  cplx *line(std::size_t m) { return values.data() + m * grid.x.n; }
  const cplx *line(std::size_t m) const { return values.data() + m * grid.x.n; }
};

using HalfLineField = SampledField<half_line_tag>;
using LineField = SampledField<line_tag>;

// A field on all four sheets sharing one grid. With half_line_tag the sheets
// are E_1..E_4 of d_b(D_beta); with line_tag they are E'_1..E'_4 of d_b(D'_beta).
template<typename Tag>
struct SheetedField
{
  Grid2 grid;
  std::array<SampledField<Tag>, 4> sheets;

  SheetedField() = default;
  explicit SheetedField(const Grid2 &g)
      : grid(g), sheets{SampledField<Tag>(g), SampledField<Tag>(g), SampledField<Tag>(g), SampledField<Tag>(g)}
  {}

  SampledField<Tag> &sheet(Sheet s) { return sheets[sheet_index(s)]; }
  const SampledField<Tag> &sheet(Sheet s) const { return sheets[sheet_index(s)]; }
};

using BoundaryField = SheetedField<half_line_tag>;
using PrimeBoundaryField = SheetedField<line_tag>;

// F(xi_k, j) in FFT order along xi, modes j = -M/2..M/2-1; storage [jj * n + k].
struct Spectrum
{
  Grid2 grid;
  std::vector<cplx> values;
  bool truncation_warning = false; // input did not decay at the box edges

  Spectrum() = default;
  explicit Spectrum(const Grid2 &g) : grid(g), values(g.size(), cplx{}) {}

  cplx &at(std::size_t k, std::size_t jj) { return values[jj * grid.x.n + k]; }
  const cplx &at(std::size_t k, std::size_t jj) const { return values[jj * grid.x.n + k]; }
  cplx *mode_line(std::size_t jj) { return values.data() + jj * grid.x.n; }
  const cplx *mode_line(std::size_t jj) const { return values.data() + jj * grid.x.n; }
};

template<typename F>
F scaled(F f, cplx c)
{
  for (auto &v : f.values)
    v *= c;
  return f;
}

} // namespace wormszego
