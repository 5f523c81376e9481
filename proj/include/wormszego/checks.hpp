#pragma once

// Invariant checks shared by the selftest command and the acceptance run.
// Each returns measured value, tolerance and verdict; none of them print.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace wormszego::checks {

struct Result
{
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

inline Result make_result(std::string name, double measured, double tol, std::string detail = {})
{
  return {std::move(name), measured, tol, measured < tol, std::move(detail)};
}

template<typename Tag>
double max_abs_diff(const SampledField<Tag> &a, const SampledField<Tag> &b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

template<typename Tag>
double max_abs(const SampledField<Tag> &a)
{
  double d = 0.0;
  for (const auto &v : a.values)
    d = std::max(d, std::abs(v));
  return d;
}

// Relative L^2(d rho d theta) distance of half-line fields, i.e. the plain
// relative L^2 distance of their C_2 images. Pointwise relative errors in rho
// are meaningless near rho = 0 where rho^{-1/2} magnifies rounding.
inline double rel_l2(const HalfLineField &a, const HalfLineField &b)
{
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < a.grid.theta.m_count; ++m)
    for (std::size_t k = 0; k < a.grid.x.n; ++k) {
      const double r = a.grid.x.rho(k);
      num += std::norm(a.at(k, m) - b.at(k, m)) * r;
      den += std::norm(b.at(k, m)) * r;
    }
  return std::sqrt(num / den);
}

// Sum of a few Gaussian wave packets per angular mode, random but seeded.
// Smooth and decaying, so the spectrum is effectively band-limited.
template<typename Tag>
SampledField<Tag> packet_field(const Grid2 &g, unsigned seed, double width = 1.5)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SampledField<Tag> f(g);
  const int modes = std::min<int>(3, static_cast<int>(g.theta.m_count / 2) - 1);
  for (int j = -modes; j <= modes; ++j) {
    const cplx amp{u(rng), u(rng)};
    const double centre = 3.0 * u(rng), freq = 2.0 * u(rng);
    for (std::size_t m = 0; m < g.theta.m_count; ++m) {
      const cplx ang = std::polar(1.0, j * g.theta.theta(m));
      for (std::size_t k = 0; k < g.x.n; ++k) {
        const double x = g.x.x(k) - centre;
        f.at(k, m) += amp * ang * std::polar(std::exp(-x * x / (width * width)), freq * x);
      }
    }
  }
  return f;
}

// Half-line field whose C_2 image is a wave packet.
inline HalfLineField packet_half_line(const Grid2 &g, unsigned seed) { return cayley_inverse(2.0, packet_field<line_tag>(g, seed)); }

inline BoundaryField packet_boundary(const Grid2 &g, unsigned seed)
{
  BoundaryField f(g);
  for (int s = 0; s < 4; ++s)
    f.sheets[s] = packet_half_line(g, seed + 17u * static_cast<unsigned>(s));
  return f;
}

// sum_k w_k sum f conj(h) rho dx d theta
inline cplx weighted_inner(const BoundaryField &f, const BoundaryField &h, const WormParams &w)
{
  cplx total{};
  const Grid2 &g = f.grid;
  for (Sheet s : all_sheets) {
    cplx acc{};
    for (std::size_t m = 0; m < g.theta.m_count; ++m)
      for (std::size_t k = 0; k < g.x.n; ++k)
        acc += f.sheet(s).at(k, m) * std::conj(h.sheet(s).at(k, m)) * g.x.rho(k);
    total += measure_weight(s, w) * acc * g.x.dx() * g.theta.dtheta();
  }
  return total;
}

// ---------------------------------------------------------------------------

inline std::vector<Result> transforms(std::size_t n = 1u << 16, std::size_t M = 16)
{
  const Grid2 g{make_log_grid(-30.0, 30.0, n), make_angular_grid(M)};
  const LineField f = packet_field<line_tag>(g, 7u);
  const Spectrum s = mf_forward(f);
  const LineField back = mf_inverse(s);
  double e2 = 0.0;
  for (const auto &v : f.values)
    e2 += std::norm(v);
  const double phys = e2 * g.x.dx() * g.theta.dtheta();
  double spec = 0.0;
  for (const auto &v : s.values)
    spec += std::norm(v);
  spec *= g.x.dxi() / (4.0 * pi * pi);

  const HalfLineField phi = packet_half_line(g, 11u);
  const HalfLineField phi_back = cayley_inverse(2.0, mf_inverse(mf_forward(cayley(2.0, phi))));
  return {make_result("transform_roundtrip", max_abs_diff(back, f) / max_abs(f), 1e-10),
          make_result("plancherel", std::abs(phys - spec) / phys, 1e-10),
          make_result("mellin_roundtrip", rel_l2(phi_back, phi), 1e-10)};
}

inline std::vector<Result> projection(const WormParams &w, const Grid2 &g = {make_log_grid(-30.0, 30.0, 1u << 13), make_angular_grid(16)})
{
  const BoundaryField f = packet_boundary(g, 3u), h = packet_boundary(g, 5u);
  const BoundaryField Pf = apply_szego(f, w), PPf = apply_szego(Pf, w), Ph = apply_szego(h, w);
  double diff = 0.0, scale = 0.0;
  for (int s = 0; s < 4; ++s) {
    diff = std::max(diff, max_abs_diff(PPf.sheets[s], Pf.sheets[s]));
    scale = std::max(scale, max_abs(Pf.sheets[s]));
  }
  const cplx lhs = weighted_inner(Pf, h, w), rhs = weighted_inner(f, Ph, w);
  const double sa = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
  const std::string tag = " beta=" + std::to_string(w.beta);
  return {make_result("idempotence" + tag, diff / scale, 1e-6), make_result("self_adjointness" + tag, sa, 1e-6)};
}

inline std::vector<Result> multiplier_algebra(const WormParams &w)
{
  std::vector<Result> out;
  {
    const Grid2 g{make_log_grid(-40.0, 40.0, 1u << 13), make_angular_grid(8)};
    const HalfLineField f = packet_half_line(g, 23u);
    const MultiplierTable A = block_symbol(1, 2, w, g);
    const MultiplierTable B = make_table(g, "M_pi", [](double xi, int j) { return cplx{model_symbol_Ma(pi, xi, j), 0.0}; });
    const auto [two_step, one_step] = compose_multipliers(A, B, f);
    out.push_back(make_result("composition", rel_l2(two_step, one_step), 1e-9));
  }
  {
    // shifted contours see line fields decaying like e^{-nu |x| / 4}: wide box
    const Grid2 g{make_log_grid(-400.0, 400.0, 1u << 14), make_angular_grid(4)};
    HalfLineField phi(g);
    for (std::size_t m = 0; m < g.theta.m_count; ++m)
      for (std::size_t k = 0; k < g.x.n; ++k) {
        const double x = g.x.x(k);
        phi.at(k, m) = std::exp(-0.5 * x - x * x) * (1.0 + 0.5 * std::polar(1.0, g.theta.theta(m)));
      }
    double worst = 0.0;
    std::string where;
    for (double c : {0.5 - w.nu / 4.0, 0.5 + w.nu / 4.0})
      for (int k = 1; k <= 4; ++k)
        for (int l = 1; l <= 4; ++l) {
          const double d = strip_shift_check(k, l, phi, c, w);
          if (d >= worst) {
            worst = d;
            where = "block(" + std::to_string(k) + "," + std::to_string(l) + ") c=" + std::to_string(c);
          }
        }
    out.push_back(make_result("strip_shift", worst, 1e-6, "worst at " + where));
  }
  return out;
}

inline std::vector<Result> model_operators()
{
  std::vector<Result> out;
  const Grid2 g{make_log_grid(-60.0, 60.0, 1u << 14), make_angular_grid(8)};
  const HalfLineField f = packet_half_line(g, 31u);
  for (double a : {pi, -pi, 1.5 * pi}) {
    const HalfLineField r1 = p_a(a, f), r2 = p_a_direct(a, f);
    out.push_back(make_result("P_a two routes a=" + std::to_string(a), rel_l2(r1, r2), 1e-8));
    const HalfLineField q1 = q_a(a, f), q2 = q_a_mode_shifted(a, f);
    out.push_back(make_result("Q_a two routes a=" + std::to_string(a), rel_l2(q2, q1), 1e-7));
  }
  {
    const HalfLineField spectral = lambda_a(pi, f);
    const HalfLineField truncated = lambda_a_truncated(pi, make_window(1e-5, 60.0), f);
    out.push_back(make_result("Lambda_a spectral vs truncated", rel_l2(truncated, spectral), 1e-4));
  }
  std::vector<double> norms;
  std::string listing = "norms";
  for (double eps : {1e-3, 1e-4, 1e-5})
    for (double R : {20.0, 50.0, 100.0}) {
      norms.push_back(truncated_cz_l2_norm(pi, make_window(eps, R)));
      listing += " " + std::to_string(norms.back());
    }
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  out.push_back(make_result("truncated CZ norm stability", (*hi - *lo) / *lo, 0.05, listing));
  return out;
}

} // namespace wormszego::checks
