#pragma once

// Model worm domain D_beta: parameters, the four sheets of the distinguished
// boundary, surface-measure weights, the biholomorphism with D'_beta and the
// weight psi_p behind the Hardy-space isometry.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace wormszego {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct WormParams
{
  double beta;           // > pi
  double nu;             // pi / (2 beta - pi)
  double sheet_height;   // s* = beta - pi/2
  double lp_lower;       // 2 / (1 + nu)
  double lp_upper;       // 2 / (1 - nu)
  double sobolev_l2_sup; // nu / 2

  // 2 beta - pi, the angular aperture that recurs in every symbol
  double aperture() const { return 2.0 * beta - pi; }
};

inline WormParams make_params(double beta)
{
  if (!std::isfinite(beta) || beta <= pi)
    throw std::invalid_argument("worm parameter beta must exceed pi, got " + std::to_string(beta));
  WormParams w{};
  w.beta = beta;
  w.nu = pi / (2.0 * beta - pi);
  w.sheet_height = beta - pi / 2.0;
  w.lp_lower = 2.0 / (1.0 + w.nu);
  w.lp_upper = 2.0 / (1.0 - w.nu);
  w.sobolev_l2_sup = w.nu / 2.0;
  return w;
}

enum class Sheet { E1 = 1, E2 = 2, E3 = 3, E4 = 4 };

inline constexpr std::array<Sheet, 4> all_sheets{Sheet::E1, Sheet::E2, Sheet::E3, Sheet::E4};

inline constexpr int sheet_index(Sheet s) { return static_cast<int>(s) - 1; }

inline Sheet sheet_from_number(int k)
{
  if (k < 1 || k > 4)
    throw std::out_of_range("sheet number must be in 1..4, got " + std::to_string(k));
  return static_cast<Sheet>(k);
}

inline constexpr bool upper_sheet(Sheet s) { return s == Sheet::E1 || s == Sheet::E2; }

// arg z1 along the sheet: beta, beta - pi, -beta, -beta + pi
inline double sheet_arg_z1(Sheet s, const WormParams &w)
{
  switch (s) {
  case Sheet::E1: return w.beta;
  case Sheet::E2: return w.beta - pi;
  case Sheet::E3: return -w.beta;
  case Sheet::E4: return -w.beta + pi;
  }
  return 0.0;
}

// log |z2|^2 on the sheet
inline double sheet_log_mod_z2_sq(Sheet s, const WormParams &w)
{
  return upper_sheet(s) ? w.sheet_height : -w.sheet_height;
}

// Im z1 of the matching component E'_l of d_b(D'_beta)
inline double prime_sheet_imag_z1(Sheet s, const WormParams &w) { return sheet_arg_z1(s, w); }

struct BoundaryPoint
{
  Sheet sheet;
  double rho;   // > 0, the rho = 0 circles carry no measure
  double theta; // [0, 2 pi)
};

inline BoundaryPoint make_point(Sheet s, double rho, double theta)
{
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("boundary point needs rho > 0");
  if (!(theta >= 0.0 && theta < 2.0 * pi))
    throw std::invalid_argument("boundary point needs theta in [0, 2pi)");
  return {s, rho, theta};
}

inline std::pair<cplx, cplx> embed(const BoundaryPoint &pt, const WormParams &w)
{
  const double z2_mod = std::exp(sheet_log_mod_z2_sq(pt.sheet, w) / 2.0);
  return {std::polar(pt.rho, sheet_arg_z1(pt.sheet, w)), std::polar(z2_mod, pt.theta)};
}

// Density of d sigma against d rho d theta.
inline double measure_weight(Sheet s, const WormParams &w)
{
  return std::exp(sheet_log_mod_z2_sq(s, w) / 2.0);
}

enum class Direction { forward, inverse };

// forward: D'_beta -> D_beta, (z1, z2) -> (e^{z1}, z2); inverse uses the principal Log.
inline std::pair<cplx, cplx> map_phi(cplx z1, cplx z2, Direction dir)
{
  if (dir == Direction::forward)
    return {std::exp(z1), z2};
  if (z1 == cplx{0.0, 0.0})
    throw std::domain_error("map_phi inverse is singular at z1 = 0");
  if (z2 == cplx{0.0, 0.0})
    throw std::domain_error("map_phi inverse needs z2 != 0");
  const double l = std::log(std::norm(z2));
  const cplx turned = z1 * std::polar(1.0, -l);
  return {std::log(turned) + cplx{0.0, l}, z2};
}

// psi_p(z1, z2) = e^{-(i/p) log|z2|^2} (z1 e^{-i log|z2|^2})^{-1/p}, principal branch.
inline cplx psi_weight(cplx z1, cplx z2, double p)
{
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("psi_weight needs p in (1, inf)");
  if (z2 == cplx{0.0, 0.0})
    throw std::domain_error("psi_weight needs z2 != 0");
  const double l = std::log(std::norm(z2));
  const cplx w = z1 * std::polar(1.0, -l);
  if (std::abs(w) == 0.0 || (w.real() <= 0.0 && std::abs(w.imag()) <= 1e-14 * std::abs(w)))
    throw std::domain_error("psi_weight argument lies on the branch cut of the principal root");
  return std::polar(1.0, -l / p) * std::pow(w, -1.0 / p);
}

} // namespace wormszego
