#pragma once

// The counterexample g, its spectrum, the quadrature oracle for P_{1,1} g,
// decay fits, threshold sweeps, kernel verifications and the isometry check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geometry.hpp"
#include "grid.hpp"
#include "isometry.hpp"
#include "multipliers.hpp"
#include "norms.hpp"
#include "parallel.hpp"
#include "szego.hpp"
#include "transforms.hpp"

namespace wormszego {

// Tails of P_{1,1} g decay only like e^{-nu |x| / 2} in x, so the box is wide.
inline Grid2 experiment_grid() { return {make_log_grid(-160.0, 160.0, 1u << 16), make_angular_grid(2)}; }

// log x = 20, 22, ..., 40; the asymptotic regime starts well beyond |log x| ~ 8.
inline std::vector<double> default_ladder()
{
  std::vector<double> l;
  for (int v = 20; v <= 40; v += 2)
    l.push_back(v);
  return l;
}

// Rescaling g~ = e^{-4 beta^2} g, recorded as its logarithm.
inline double g_rescale_log(const WormParams &w) { return 4.0 * w.beta * w.beta; }

// g~(rho) = e^{4 i beta log rho} e^{-(log rho)^2 - log(rho)/2} on E1.
inline BoundaryField make_g(const WormParams &w, const Grid2 &g)
{
  BoundaryField f(g);
  auto &e1 = f.sheet(Sheet::E1);
  for (std::size_t m = 0; m < g.theta.m_count; ++m)
    for (std::size_t k = 0; k < g.x.n; ++k) {
      const double x = g.x.x(k);
      e1.at(k, m) = std::polar(std::exp(-x * x - 0.5 * x), 4.0 * w.beta * x);
    }
  return f;
}

// One-dimensional transform of C_2 g~: sqrt(pi) e^{-(xi - 4 beta)^2 / 4}.
inline double analytic_g_spectrum(const WormParams &w, double xi)
{
  const double d = xi - 4.0 * w.beta;
  return std::sqrt(pi) * std::exp(-d * d / 4.0);
}

struct P11Result
{
  HalfLineField field;    // P_{1,1} g on E1 (unrescaled)
  double rescale_log = 0; // log of the factor removed from g~
};

// P_{1,1} applied to the closed-form spectrum of C_2 g~. Spectrum and symbol
// are combined as logarithms so the e^{-4 beta^2} rescaling can be removed
// before exponentiating; sampling g~ and running mf_forward would bury the
// O(e^{-4 beta^2}) result under the FFT rounding floor.
inline P11Result p11_pipeline(const WormParams &w, const Grid2 &g,
                              BlockNormalization norm = BlockNormalization::measure_normalized)
{
  P11Result r;
  r.rescale_log = g_rescale_log(w);
  Spectrum s(g);
  const std::size_t slot = g.theta.mode_slot(0);
  const double lw = std::log(block_normalization_factor(1, norm, w));
  for (std::size_t q = 0; q < g.x.n; ++q) {
    const double xi = g.x.xi(q);
    const double d = xi - 4.0 * w.beta;
    // 2 pi from the theta integral of a theta-independent field
    const double lg = std::log(2.0 * pi * std::sqrt(pi)) - d * d / 4.0 + r.rescale_log;
    s.at(q, slot) = std::exp(lg + lw + block_log_symbol(1, 1, xi, 0, w));
  }
  r.field = cayley_inverse(2.0, mf_inverse(s));
  return r;
}

// ---------------------------------------------------------------------------
// Quadrature oracle.
//
// Without the -1/4 shift the C_2 spectrum of P_{1,1} g is (sqrt(pi)/4) w_1 f h r
// with f = e^{-xi^2/4}, h = 1/cosh(pi xi), r = 1/cosh((2 beta - pi) xi), whose inverse
// transforms are e^{-x^2}/sqrt(pi), sech(x/2)/(2 pi) and nu sech(nu x/2)/(2 pi).
// By the convolution theorem
//   F^{-1}[f h r](x) = nu / (4 pi^{5/2}) int int e^{-s^2} / (cosh(nu(x-t)/2) cosh((t-s)/2)) ds dt.

struct OracleValue
{
  double value = 0.0;
  double error_estimate = 0.0;
};

namespace detail {

using gk61 = boost::math::quadrature::gauss_kronrod<double, 61>;

// H(t) = int e^{-s^2} / cosh((t - s)/2) ds; e^{-s^2} is below 1e-43 past |s| = 10
inline double oracle_inner(double t, double *err = nullptr)
{
  double e = 0.0;
  const double v = gk61::integrate([t](double s) { return std::exp(-s * s) / std::cosh((t - s) / 2.0); }, -10.0, 10.0, 15,
                                   1e-13, &e);
  if (err)
    *err = e;
  return v;
}

// int K(t) H(t) dt, split at 0 and x where the two factors peak.
template<typename Kernel>
OracleValue oracle_outer(double x, Kernel &&K)
{
  const double a = std::min(0.0, x), b = std::max(0.0, x);
  auto integrand = [&](double t) {
    const double h = oracle_inner(t);
    return h == 0.0 ? 0.0 : K(t) * h; // far tails: K may overflow where H has underflowed
  };
  OracleValue out;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  out.value += gk61::integrate(integrand, -inf, a, 15, 1e-11, &e1);
  if (b > a)
    out.value += gk61::integrate(integrand, a, b, 15, 1e-11, &e2);
  out.value += gk61::integrate(integrand, b, inf, 15, 1e-11, &e3);
  out.error_estimate = e1 + e2 + e3;
  return out;
}

} // namespace detail

// The double integral itself, at log-variable x.
inline OracleValue oracle_integral(double x, double nu)
{
  return detail::oracle_outer(x, [&](double t) { return 1.0 / std::cosh(nu * (x - t) / 2.0); });
}

// rho^{-1/2} w_1 (sqrt(pi)/4) nu/(4 pi^{5/2}) I(log rho), at each rho.
inline std::vector<OracleValue> p11_oracle(const std::vector<double> &rho, const WormParams &w)
{
  std::vector<OracleValue> out(rho.size());
  const double c = measure_weight(Sheet::E1, w) * (std::sqrt(pi) / 4.0) * w.nu / (4.0 * std::pow(pi, 2.5));
  parallel_for(rho.size(), [&](std::size_t i) {
    if (!(rho[i] > 0.0))
      throw std::invalid_argument("p11_oracle needs rho > 0");
    const OracleValue v = oracle_integral(std::log(rho[i]), w.nu);
    const double scale = c / std::sqrt(rho[i]);
    out[i] = {v.value * scale, v.error_estimate * scale};
    if (!(v.error_estimate <= 1e-8 * std::abs(v.value)))
      throw std::runtime_error("p11_oracle quadrature did not converge at rho = " + std::to_string(rho[i]));
  });
  return out;
}

struct DecayConstants
{
  double A = 0.0;
  double B = 0.0;
  double A_refinement = 0.0; // relative change against a coarser tolerance
};

// A = int int sech(nu t/2) e^{-s^2} sech((t-s)/2), B = int int 2 e^{nu t/2} e^{-s^2} sech((t-s)/2).
inline DecayConstants decay_constants(const WormParams &w)
{
  const double nu = w.nu;
  DecayConstants d;
  d.A = detail::oracle_outer(0.0, [nu](double t) { return 1.0 / std::cosh(nu * t / 2.0); }).value;
  d.B = detail::oracle_outer(0.0, [nu](double t) { return 2.0 * std::exp(nu * t / 2.0); }).value;
  // coarse: fixed 61-point rule on a truncated box
  const double coarse = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [nu](double t) { return detail::oracle_inner(t) / std::cosh(nu * t / 2.0); }, -200.0, 200.0, 3, 1e-6);
  d.A_refinement = std::abs(coarse - d.A) / d.A;
  return d;
}

// ---------------------------------------------------------------------------
// Decay experiment

struct SlopeFit
{
  std::vector<double> rho;
  std::vector<double> values;
  PowerFit fit;
  double predicted = 0.0;
  bool pass = false;
};

struct DecayReport
{
  double beta = 0.0, nu = 0.0;
  Grid2 grid;
  double rescale_log = 0.0;
  double tolerance = 0.02;
  SlopeFit pipeline_infinity, pipeline_origin;
  SlopeFit oracle_infinity, oracle_origin;
  bool oracle_run = false;
  // constant-only comparison on log rho in [-4, 4]
  double fitted_constant = 0.0;
  double constant_max_deviation = 0.0;
  double constant_tolerance = 1e-3;
  bool constant_only_holds = false;
  bool exponents_match = false;

  bool pass() const
  {
    const bool p = pipeline_infinity.pass && pipeline_origin.pass;
    return oracle_run ? p && oracle_infinity.pass && oracle_origin.pass && exponents_match : p;
  }
};

namespace detail {

inline std::size_t nearest_node(const LogGrid &g, double x)
{
  const double k = std::round((x - g.x_min) / g.dx());
  if (k < 0.0 || k >= static_cast<double>(g.n))
    throw std::out_of_range("ladder point outside the grid");
  return static_cast<std::size_t>(k);
}

inline SlopeFit fit_slope(std::vector<double> rho, std::vector<double> values, double predicted, double tol)
{
  SlopeFit s;
  s.fit = fit_power_law(rho, values);
  s.rho = std::move(rho);
  s.values = std::move(values);
  s.predicted = predicted;
  s.pass = std::abs(s.fit.exponent - predicted) <= tol;
  return s;
}

} // namespace detail

inline DecayReport decay_experiment(const WormParams &w, const Grid2 &g, const std::vector<double> &ladder,
                                    bool with_oracle = true, double tol = 0.02)
{
  DecayReport r;
  r.beta = w.beta;
  r.nu = w.nu;
  r.grid = g;
  r.tolerance = tol;
  const P11Result p = p11_pipeline(w, g);
  r.rescale_log = p.rescale_log;

  std::vector<double> rho_inf, rho_zero, v_inf, v_zero;
  for (double L : ladder) {
    const std::size_t ki = detail::nearest_node(g.x, L), kz = detail::nearest_node(g.x, -L);
    rho_inf.push_back(g.x.rho(ki));
    v_inf.push_back(std::abs(p.field.at(ki, 0)));
    rho_zero.push_back(g.x.rho(kz));
    v_zero.push_back(std::abs(p.field.at(kz, 0)));
  }
  const double pred_inf = -(1.0 + w.nu) / 2.0, pred_zero = (w.nu - 1.0) / 2.0;
  r.pipeline_infinity = detail::fit_slope(rho_inf, v_inf, pred_inf, tol);
  r.pipeline_origin = detail::fit_slope(rho_zero, v_zero, pred_zero, tol);
  if (!with_oracle)
    return r;

  r.oracle_run = true;
  auto values_of = [](const std::vector<OracleValue> &v) {
    std::vector<double> out;
    for (const auto &o : v)
      out.push_back(o.value);
    return out;
  };
  r.oracle_infinity = detail::fit_slope(rho_inf, values_of(p11_oracle(rho_inf, w)), pred_inf, tol);
  r.oracle_origin = detail::fit_slope(rho_zero, values_of(p11_oracle(rho_zero, w)), pred_zero, tol);
  r.exponents_match = std::abs(r.oracle_infinity.fit.exponent - r.pipeline_infinity.fit.exponent) <= tol &&
                      std::abs(r.oracle_origin.fit.exponent - r.pipeline_origin.fit.exponent) <= tol;

  // one positive constant fitted in log space, then the worst pointwise deviation
  std::vector<double> rho_mid, v_mid;
  for (int i = -16; i <= 16; ++i) {
    const std::size_t k = detail::nearest_node(g.x, 0.25 * i);
    rho_mid.push_back(g.x.rho(k));
    v_mid.push_back(std::abs(p.field.at(k, 0)));
  }
  const auto o_mid = values_of(p11_oracle(rho_mid, w));
  double mean_log = 0.0;
  for (std::size_t i = 0; i < rho_mid.size(); ++i)
    mean_log += std::log(v_mid[i] / o_mid[i]);
  r.fitted_constant = std::exp(mean_log / static_cast<double>(rho_mid.size()));
  for (std::size_t i = 0; i < rho_mid.size(); ++i)
    r.constant_max_deviation = std::max(r.constant_max_deviation, std::abs(v_mid[i] / (r.fitted_constant * o_mid[i]) - 1.0));
  r.constant_only_holds = r.constant_max_deviation < r.constant_tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Threshold sweeps.
//
// Each quantity is evaluated on nested truncations. The increments between
// consecutive truncations are fitted to a power of the truncation parameter
// (R at infinity, 1/delta at the origin): growth exponent > 0.02 with r^2 > 0.9
// is divergent, |exponent| <= 0.02 marginal, < -0.02 convergent.

enum class Verdict { convergent, marginal, divergent };

inline const char *to_string(Verdict v)
{
  switch (v) {
  case Verdict::convergent: return "convergent";
  case Verdict::marginal: return "marginal";
  default: return "divergent";
  }
}

struct VerdictRule
{
  double threshold = 0.02;
  double min_r2 = 0.9;
  double exponent_tolerance = 0.05; // measured vs predicted growth, divergent sides
};

inline Verdict verdict_from_fit(const PowerFit &f, const VerdictRule &rule)
{
  if (f.exponent > rule.threshold && f.r2 > rule.min_r2)
    return Verdict::divergent;
  if (f.exponent < -rule.threshold)
    return Verdict::convergent;
  return Verdict::marginal;
}

inline Verdict predicted_verdict(double exponent)
{
  if (std::abs(exponent) < 1e-9)
    return Verdict::marginal;
  return exponent > 0.0 ? Verdict::divergent : Verdict::convergent;
}

inline Verdict worst(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

struct SideResult
{
  std::string side; // "origin" or "infinity"
  std::vector<double> truncation; // R or 1/delta at the inner end of each increment
  std::vector<double> increments;
  PowerFit fit;
  double predicted_exponent = 0.0;
  Verdict verdict = Verdict::convergent;
  Verdict predicted = Verdict::convergent;
  bool exponent_ok = true;
};

struct SweepEntry
{
  std::string label;
  double p = 2.0;
  double s = 0.0;
  SideResult origin, infinity;
  Verdict verdict = Verdict::convergent;
  Verdict predicted = Verdict::convergent;
  double doubling_change = std::numeric_limits<double>::quiet_NaN(); // lp only
  bool pass = false;
};

struct SweepReport
{
  std::string kind;
  double beta = 0.0, nu = 0.0;
  double lp_lower = 0.0, lp_upper = 0.0, sobolev_l2_sup = 0.0;
  Grid2 grid;
  double rescale_log = 0.0;
  std::vector<double> ladder;
  VerdictRule rule;
  std::vector<SweepEntry> entries;

  bool all_pass() const
  {
    return std::all_of(entries.begin(), entries.end(), [](const SweepEntry &e) { return e.pass; });
  }
};

namespace detail {

inline SweepReport sweep_header(const std::string &kind, const WormParams &w, const Grid2 &g, double rescale_log,
                                const std::vector<double> &ladder, const VerdictRule &rule)
{
  SweepReport r;
  r.kind = kind;
  r.beta = w.beta;
  r.nu = w.nu;
  r.lp_lower = w.lp_lower;
  r.lp_upper = w.lp_upper;
  r.sobolev_l2_sup = w.sobolev_l2_sup;
  r.grid = g;
  r.rescale_log = rescale_log;
  r.ladder = ladder;
  r.rule = rule;
  return r;
}

inline void finish_side(SideResult &side, double predicted, const VerdictRule &rule)
{
  // a zero increment (exact cancellation) cannot be fitted; clamp to the smallest double
  for (auto &v : side.increments)
    v = std::max(v, std::numeric_limits<double>::min());
  side.fit = fit_power_law(side.truncation, side.increments);
  side.predicted_exponent = predicted;
  side.verdict = verdict_from_fit(side.fit, rule);
  side.predicted = predicted_verdict(predicted);
  side.exponent_ok = side.predicted != Verdict::divergent || std::abs(side.fit.exponent - predicted) <= rule.exponent_tolerance;
}

inline void finish_entry(SweepEntry &e)
{
  e.verdict = worst(e.origin.verdict, e.infinity.verdict);
  e.predicted = worst(e.origin.predicted, e.infinity.predicted);
  e.pass = e.verdict == e.predicted && e.origin.exponent_ok && e.infinity.exponent_ok;
}

inline void require_ladder(const std::vector<double> &ladder, const LogGrid &g)
{
  if (ladder.size() < 6)
    throw std::invalid_argument("truncation ladder needs at least 6 levels");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || (i > 0 && !(ladder[i] > ladder[i - 1])))
      throw std::invalid_argument("truncation ladder must be positive and increasing (log R values)");
  }
  if (ladder.back() + 1.0 > std::min(-g.x_min, g.x_max))
    throw std::invalid_argument("truncation ladder reaches past the grid");
}

} // namespace detail

// ||P_{1,1} g||_{L^p} over rho in [1/R, R], R = e^L for L in the ladder.
inline SweepReport lp_sweep(const WormParams &w, const std::vector<double> &p_list, const Grid2 &g,
                            const std::vector<double> &ladder, const VerdictRule &rule = {})
{
  detail::require_ladder(ladder, g.x);
  const P11Result pr = p11_pipeline(w, g);
  SweepReport rep = detail::sweep_header("lp", w, g, pr.rescale_log, ladder, rule);
  const double wt = measure_weight(Sheet::E1, w) * 2.0 * pi * g.x.dx();
  const std::size_t n = g.x.n;

  for (double p : p_list) {
    require_exponent(p);
    std::vector<double> dens(n);
    for (std::size_t k = 0; k < n; ++k)
      dens[k] = std::pow(std::abs(pr.field.at(k, 0)), p) * g.x.rho(k) * wt;
    auto band = [&](double lo, double hi) { // sum over lo <= x < hi
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double x = g.x.x(k);
        if (x >= lo && x < hi)
          acc += dens[k];
      }
      return acc;
    };

    SweepEntry e;
    e.label = "p=" + std::to_string(p);
    e.p = p;
    e.origin.side = "origin";
    e.infinity.side = "infinity";
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
      e.origin.truncation.push_back(std::exp(ladder[i]));
      e.origin.increments.push_back(band(-ladder[i + 1], -ladder[i]));
      e.infinity.truncation.push_back(std::exp(ladder[i]));
      e.infinity.increments.push_back(band(ladder[i], ladder[i + 1]));
    }
    detail::finish_side(e.origin, p * (1.0 - w.nu) / 2.0 - 1.0, rule);
    detail::finish_side(e.infinity, 1.0 - p * (1.0 + w.nu) / 2.0, rule);
    detail::finish_entry(e);

    // change of the truncated norm when R doubles from 2^10 to 2^11
    const double L1 = 10.0 * std::log(2.0), L2 = 11.0 * std::log(2.0);
    const double n1 = std::pow(band(-L1, L1), 1.0 / p), n2 = std::pow(band(-L2, L2), 1.0 / p);
    e.doubling_change = std::abs(n2 - n1) / n1;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

namespace detail {

// Gagliardo seminorm of P_{1,1} g in rho, with origin and infinity ladders.
inline SweepEntry gagliardo_entry(const HalfLineField &f, double s, double p, const WormParams &w,
                                  const std::vector<double> &ladder, const VerdictRule &rule, std::size_t stride)
{
  const LogGrid &g = f.grid.x;
  const double reach = ladder.back() + 0.5;
  const GagliardoCells cells = half_line_cells(g, f.line(0), -reach, reach, stride);
  const GagliardoSums sums = gagliardo_sums(cells, s, p);
  const std::size_t n = cells.nodes.size();

  // node index of the first cell whose left edge is at or beyond edge value v
  auto first_at = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(cells.edges.begin(), cells.edges.end() - 1, v) - cells.edges.begin());
  };

  SweepEntry e;
  e.p = p;
  e.s = s;
  e.origin.side = "origin";
  e.infinity.side = "infinity";
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    // origin: rows whose cells fill [e^{-L_{i+1}}, e^{-L_i})
    const std::size_t a = first_at(std::exp(-ladder[i + 1])), b = first_at(std::exp(-ladder[i]));
    double acc = 0.0;
    for (std::size_t k = a; k < b && k < n; ++k)
      acc += sums.row_upper[k];
    e.origin.truncation.push_back(1.0 / cells.edges[b]);
    e.origin.increments.push_back(acc);
    // infinity: columns whose cells fill [e^{L_i}, e^{L_{i+1}})
    const std::size_t c = first_at(std::exp(ladder[i])), d = first_at(std::exp(ladder[i + 1]));
    double acc2 = 0.0;
    for (std::size_t k = c; k < d && k < n; ++k)
      acc2 += sums.col_lower[k];
    e.infinity.truncation.push_back(cells.edges[c]);
    e.infinity.increments.push_back(acc2);
  }
  const double mid = s + 0.5 - 1.0 / p;
  finish_side(e.origin, p * (mid - w.nu / 2.0), rule);
  // at infinity the mass of f near the origin also interacts with the far cells,
  // which decays like R^{-sp}; the slower of the two terms wins
  finish_side(e.infinity, std::max(-p * (mid + w.nu / 2.0), -s * p), rule);
  finish_entry(e);
  return e;
}

} // namespace detail

inline SweepReport sobolev_lp_sweep(const WormParams &w, const std::vector<std::pair<double, double>> &pairs, const Grid2 &g,
                                    const std::vector<double> &ladder, const VerdictRule &rule = {}, std::size_t stride = 8)
{
  detail::require_ladder(ladder, g.x);
  const P11Result pr = p11_pipeline(w, g);
  SweepReport rep = detail::sweep_header("sobolev_lp", w, g, pr.rescale_log, ladder, rule);
  rep.entries.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [s, p] = pairs[i];
    rep.entries[i] = detail::gagliardo_entry(pr.field, s, p, w, ladder, rule, stride);
    rep.entries[i].label = "s=" + std::to_string(s) + ",p=" + std::to_string(p);
  }
  return rep;
}

inline SweepReport sobolev_sweep(const WormParams &w, const std::vector<double> &s_list, const Grid2 &g,
                                 const std::vector<double> &ladder, const VerdictRule &rule = {}, std::size_t stride = 8)
{
  std::vector<std::pair<double, double>> pairs;
  for (double s : s_list)
    pairs.emplace_back(s, 2.0);
  SweepReport rep = sobolev_lp_sweep(w, pairs, g, ladder, rule, stride);
  rep.kind = "sobolev";
  for (auto &e : rep.entries)
    e.label = "s=" + std::to_string(e.s);
  return rep;
}

// ---------------------------------------------------------------------------
// Closed-form kernel checks

struct KernelCheck
{
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct PvLevel
{
  double eps = 0.0, R = 0.0;
  double max_error = 0.0;
};

struct KernelReport
{
  double beta = 0.0, nu = 0.0;
  std::vector<KernelCheck> pairs;
  std::vector<PvLevel> pv_ladder;
  PowerFit pv_order; // max error against eps
  double pv_tolerance = 1e-4;
  bool pv_pass = false;

  bool pass() const
  {
    return pv_pass && std::all_of(pairs.begin(), pairs.end(), [](const KernelCheck &k) { return k.pass; });
  }
};

namespace detail {

// (1/2pi) int_{-50}^{50} m(xi) e^{i xi x} d xi by the trapezoid rule, step h
template<typename Sym>
cplx inverse_by_quadrature(Sym &&m, double x, double h = 1e-3, double half = 50.0)
{
  const auto n = static_cast<long long>(std::llround(2.0 * half / h));
  cplx acc{};
  for (long long i = 0; i <= n; ++i) {
    const double xi = -half + static_cast<double>(i) * h;
    const double wgt = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += wgt * m(xi) * std::polar(1.0, xi * x);
  }
  return acc * h / (2.0 * pi);
}

} // namespace detail

inline KernelReport verify_kernels(const WormParams &w, double a = pi)
{
  KernelReport r;
  r.beta = w.beta;
  r.nu = w.nu;
  const double e = w.aperture(), nu = w.nu, four_beta = 4.0 * w.beta;

  struct Pair
  {
    std::string name;
    std::function<cplx(double)> symbol;
    std::function<cplx(double)> closed;
    double tol;
  };
  const std::vector<Pair> list{
      {"gaussian", [](double xi) { return cplx{std::exp(-xi * xi / 4.0), 0.0}; },
       [](double x) { return cplx{std::exp(-x * x) / std::sqrt(pi), 0.0}; }, 1e-8},
      {"sech_pi", [](double xi) { return cplx{1.0 / std::cosh(pi * xi), 0.0}; },
       [](double x) { return cplx{1.0 / (2.0 * pi * std::cosh(x / 2.0)), 0.0}; }, 1e-6},
      {"sech_aperture", [e](double xi) { return cplx{1.0 / std::cosh(e * xi), 0.0}; },
       [nu](double x) { return cplx{nu / (2.0 * pi * std::cosh(nu * x / 2.0)), 0.0}; }, 1e-6},
      {"modulated_gaussian",
       [four_beta](double xi) { return cplx{std::sqrt(pi) * std::exp(-(xi - four_beta) * (xi - four_beta) / 4.0), 0.0}; },
       [four_beta](double x) { return std::polar(std::exp(-x * x), four_beta * x); }, 1e-8},
  };
  r.pairs.resize(list.size());
  parallel_for(list.size(), [&](std::size_t i) {
    KernelCheck c{list[i].name, 0.0, list[i].tol, false};
    for (int k = -200; k <= 200; ++k) {
      const double x = 0.05 * k;
      c.max_error = std::max(c.max_error, std::abs(detail::inverse_by_quadrature(list[i].symbol, x) - list[i].closed(x)));
    }
    c.pass = c.max_error < c.tolerance;
    r.pairs[i] = c;
  });

  const std::vector<double> eps_ladder{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  r.pv_ladder.resize(eps_ladder.size());
  parallel_for(eps_ladder.size(), [&](std::size_t i) {
    const TruncationWindow win = make_window(eps_ladder[i], 50.0);
    double err = 0.0;
    for (int k = -50; k <= 50; ++k) {
      const double xi = 0.1 * k;
      err = std::max(err, std::abs(truncated_cz_symbol(a, win, xi) - tanh_symbol(a, 0.0, xi)));
    }
    r.pv_ladder[i] = {eps_ladder[i], 50.0, err};
  });
  std::vector<double> ex, ey;
  for (const auto &l : r.pv_ladder) {
    ex.push_back(l.eps);
    ey.push_back(l.max_error);
  }
  r.pv_order = fit_power_law(ex, ey);
  r.pv_pass = r.pv_ladder.back().max_error < r.pv_tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Isometry check

struct IsometryCase
{
  std::string field;
  double p = 2.0;
  double norm_prime = 0.0, norm_image = 0.0;
  double rel_error = 0.0;
  double roundtrip_error = 0.0;
  bool pass = false;
};

struct IsometryReport
{
  double beta = 0.0;
  double tolerance = 1e-8;
  std::vector<IsometryCase> cases;
  bool pass() const
  {
    return std::all_of(cases.begin(), cases.end(), [](const IsometryCase &c) { return c.pass; });
  }
};

inline std::vector<std::pair<std::string, PrimeBoundaryField>> isometry_panel(const Grid2 &g)
{
  std::vector<std::pair<std::string, PrimeBoundaryField>> out;
  PrimeBoundaryField gauss(g), shifted(g), two_mode(g);
  for (std::size_t m = 0; m < g.theta.m_count; ++m) {
    const double th = g.theta.theta(m);
    for (std::size_t k = 0; k < g.x.n; ++k) {
      const double x = g.x.x(k);
      gauss.sheet(Sheet::E1).at(k, m) = std::exp(-x * x);
      shifted.sheet(Sheet::E3).at(k, m) = std::exp(-(x - 3.0) * (x - 3.0));
      const cplx ang = std::cos(th) + 0.5 * std::polar(1.0, 2.0 * th);
      two_mode.sheet(Sheet::E2).at(k, m) = std::exp(-x * x / 2.0) * ang;
      two_mode.sheet(Sheet::E4).at(k, m) = std::exp(-(x + 1.0) * (x + 1.0)) * ang;
    }
  }
  out.emplace_back("gaussian", std::move(gauss));
  out.emplace_back("shifted_gaussian", std::move(shifted));
  out.emplace_back("two_mode", std::move(two_mode));
  return out;
}

inline Grid2 isometry_grid() { return {make_log_grid(-20.0, 20.0, 1u << 12), make_angular_grid(16)}; }

inline IsometryReport isometry_check(const WormParams &w, const std::vector<double> &p_list, const Grid2 &g = isometry_grid(),
                                     double tol = 1e-8)
{
  IsometryReport r;
  r.beta = w.beta;
  r.tolerance = tol;
  for (const auto &[name, f] : isometry_panel(g))
    for (double p : p_list) {
      IsometryCase c;
      c.field = name;
      c.p = p;
      const BoundaryField img = lambda_isometry(f, p, w);
      c.norm_prime = lp_norm_prime(f, p, w).value;
      c.norm_image = lp_norm(img, p, w).value;
      c.rel_error = std::abs(c.norm_image - c.norm_prime) / c.norm_prime;
      const PrimeBoundaryField back = lambda_isometry_inverse(img, p, w);
      for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t i = 0; i < back.sheets[s].values.size(); ++i)
          c.roundtrip_error = std::max(c.roundtrip_error, std::abs(back.sheets[s].values[i] - f.sheets[s].values[i]));
      c.pass = c.rel_error < tol && c.roundtrip_error < 1e-12;
      r.cases.push_back(c);
    }
  return r;
}

} // namespace wormszego
