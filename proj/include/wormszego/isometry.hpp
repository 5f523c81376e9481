#pragma once

// The isometry Lambda : L^p(d_b D'_beta) -> L^p(d_b D_beta), Lambda f = psi_p (f o phi^{-1}).
// Sheet E'_l is sampled on the x line, E_l on rho = e^x, so phi^{-1} carries node
// (k, m) of E_l to node (k, m) of E'_l; that is checked, not assumed.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "geometry.hpp"
#include "grid.hpp"

namespace wormszego {

namespace detail {

inline cplx psi_at_node(Sheet s, const Grid2 &g, std::size_t k, std::size_t m, double p, const WormParams &w)
{
  const auto [z1, z2] = embed(make_point(s, g.x.rho(k), g.theta.theta(m)), w);
  const auto [w1, w2] = map_phi(z1, z2, Direction::inverse);
  const double tol = 1e-9 * (1.0 + std::abs(g.x.x(k)));
  if (std::abs(w1.real() - g.x.x(k)) > tol || std::abs(w1.imag() - prime_sheet_imag_z1(s, w)) > 1e-9 ||
      std::abs(w2 - z2) > 1e-12 * std::abs(z2))
    throw std::logic_error("phi^{-1} does not land on the matching node of the primed sheet");
  return psi_weight(z1, z2, p);
}

} // namespace detail

inline BoundaryField lambda_isometry(const PrimeBoundaryField &f, double p, const WormParams &w)
{
  for (const auto &sh : f.sheets)
    require_same_grid(f.grid, sh.grid, "lambda_isometry");
  BoundaryField out(f.grid);
  for (Sheet s : all_sheets)
    for (std::size_t m = 0; m < f.grid.theta.m_count; ++m)
      for (std::size_t k = 0; k < f.grid.x.n; ++k)
        out.sheet(s).at(k, m) = detail::psi_at_node(s, f.grid, k, m, p, w) * f.sheet(s).at(k, m);
  return out;
}

inline PrimeBoundaryField lambda_isometry_inverse(const BoundaryField &f, double p, const WormParams &w)
{
  for (const auto &sh : f.sheets)
    require_same_grid(f.grid, sh.grid, "lambda_isometry_inverse");
  PrimeBoundaryField out(f.grid);
  for (Sheet s : all_sheets)
    for (std::size_t m = 0; m < f.grid.theta.m_count; ++m)
      for (std::size_t k = 0; k < f.grid.x.n; ++k)
        out.sheet(s).at(k, m) = f.sheet(s).at(k, m) / detail::psi_at_node(s, f.grid, k, m, p, w);
  return out;
}

} // namespace wormszego
