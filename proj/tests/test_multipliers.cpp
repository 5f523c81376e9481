#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <wormszego/checks.hpp>

using namespace wormszego;

TEST(MuEta, Table)
{
  const WormParams w = make_params(2.0 * pi);
  const auto a = mu_eta(1, 1, w);
  EXPECT_DOUBLE_EQ(a.mu, -pi);
  EXPECT_DOUBLE_EQ(a.eta, -(2.0 * w.beta - pi));
  const auto b = mu_eta(1, 3, w);
  EXPECT_EQ(b.mu, 0.0);
  EXPECT_EQ(b.eta, 0.0);
  const auto c = mu_eta(3, 2, w);
  EXPECT_DOUBLE_EQ(c.mu, pi);
  EXPECT_EQ(c.eta, 0.0);
  for (int k = 1; k <= 4; ++k)
    for (int l = 1; l <= 4; ++l) {
      EXPECT_EQ(mu_eta(k, l, w).mu, mu_eta(l, k, w).mu);
      EXPECT_EQ(mu_eta(k, l, w).eta, mu_eta(l, k, w).eta);
    }
}

TEST(DFactor, CentreValue)
{
  const WormParams w = make_params(2.0 * pi);
  const cplx d = d_factor(0.5, 0, w);
  EXPECT_NEAR(d.real(), 4.0 * std::cosh(3.0 * pi / 4.0), 1e-12);
  EXPECT_NEAR(d.real(), 21.2910085980798341, 1e-12); // 30-digit reference
  EXPECT_NEAR(d.imag(), 0.0, 1e-12);
}

TEST(DFactor, CriticalLineFactorisation)
{
  const WormParams w = make_params(2.0 * pi);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double min_abs = 1e300;
  for (int i = 0; i < 100; ++i) {
    const double xi = u(rng);
    const int j = static_cast<int>(std::lround(2.0 * u(rng)));
    const cplx d = d_factor(cplx{0.5, -xi}, j, w);
    const double expect = 4.0 * std::cosh(pi * xi) * std::cosh(w.aperture() * (xi - 0.5 * j - 0.25));
    EXPECT_NEAR(std::abs(d - expect) / expect, 0.0, 1e-12);
    min_abs = std::min(min_abs, std::abs(d));
  }
  EXPECT_GT(min_abs, 0.0);
}

TEST(BlockSymbol, Values)
{
  const WormParams w = make_params(2.0 * pi);
  const double expect = 1.0 / (4.0 * std::cosh(3.0 * pi / 4.0));
  EXPECT_NEAR(block_symbol_value(1, 1, 0.0, 0, w), expect, 1e-15);
  EXPECT_NEAR(block_symbol_value(1, 1, 0.0, 0, w), 0.0469681835594292468, 1e-16);
  EXPECT_NEAR(block_symbol_value(1, 3, 0.0, 0, w), expect, 1e-15);
}

TEST(BlockSymbol, FactorisesIntoModelSymbols)
{
  // m~_{k,l}(xi, j) = m_mu(xi) m_eta(xi, j), m_mu = e^{mu xi}/(2 cosh pi xi),
  // m_eta = e^{eta (xi - j/2)} / (2 cosh(e (xi - j/2 - 1/4)))
  for (double beta : {1.5 * pi, 2.0 * pi}) {
    const WormParams w = make_params(beta);
    for (int k = 1; k <= 4; ++k)
      for (int l = 1; l <= 4; ++l) {
        const auto [mu, eta] = mu_eta(k, l, w);
        for (int j = -3; j <= 3; ++j)
          for (double xi = -4.0; xi <= 4.0; xi += 0.37) {
            const double a = std::exp(mu * xi) / (2.0 * std::cosh(pi * xi));
            const double b = std::exp(eta * (xi - 0.5 * j)) / (2.0 * std::cosh(w.aperture() * (xi - 0.5 * j - 0.25)));
            EXPECT_NEAR(block_symbol_value(k, l, xi, j, w) / (a * b), 1.0, 1e-12);
          }
      }
  }
}

TEST(BlockSymbol, NoOverflowFarOut)
{
  const WormParams w = make_params(2.0 * pi);
  for (double xi : {-400.0, -240.0, 240.0, 400.0})
    for (int k = 1; k <= 4; ++k)
      for (int l = 1; l <= 4; ++l)
        EXPECT_TRUE(std::isfinite(block_symbol_value(k, l, xi, 0, w)));
}

TEST(BlockSymbol, UniformlyBoundedUnderRefinement)
{
  for (double beta : {1.5 * pi, 2.0 * pi}) {
    const WormParams w = make_params(beta);
    for (int k = 1; k <= 4; ++k)
      for (int l = 1; l <= 4; ++l) {
        const Grid2 g1{make_log_grid(-30.0, 30.0, 1u << 12), make_angular_grid(128)};
        const Grid2 g2{make_log_grid(-60.0, 60.0, 1u << 14), make_angular_grid(128)};
        const double s1 = block_symbol(k, l, w, g1).sup, s2 = block_symbol(k, l, w, g2).sup;
        EXPECT_TRUE(std::isfinite(s1));
        EXPECT_LT(std::abs(s2 - s1) / s1, 0.01) << k << "," << l;
      }
  }
}

TEST(ModelSymbols, ma)
{
  for (double a : {pi, -pi, 2.0 * pi})
    EXPECT_DOUBLE_EQ(model_symbol_ma(a, 0.0), 0.5);
  EXPECT_NEAR(model_symbol_ma(pi, 1.0), std::exp(pi) / (2.0 * std::cosh(pi)), 1e-15);
  EXPECT_NEAR(model_symbol_ma(pi, 1.0), 0.998136038110374972, 1e-15);
  for (double xi = -3.0; xi <= 3.0; xi += 0.1) {
    EXPECT_NEAR(model_symbol_ma(pi, xi) + model_symbol_ma(pi, -xi), 1.0, 1e-15);
    EXPECT_GT(model_symbol_ma(pi, xi), 0.0);
    EXPECT_LT(model_symbol_ma(pi, xi), 1.0);
    EXPECT_LT(model_symbol_ma(pi, xi), model_symbol_ma(pi, xi + 0.1));
  }
  EXPECT_THROW(model_symbol_ma(3.0, 0.0), std::invalid_argument);
}

TEST(ModelSymbols, Ma)
{
  EXPECT_NEAR(model_symbol_Ma(pi, 0.25, 0), 0.5 * std::exp(pi / 4.0), 1e-15);
  EXPECT_NEAR(model_symbol_Ma(pi, 0.0, 0), std::exp(pi / 4.0) * model_symbol_ma(pi, -0.25), 1e-15);
  EXPECT_NEAR(model_symbol_Ma(pi, 0.0, 0), 0.377469854357065634, 1e-15);
  for (double xi = -2.0; xi <= 2.0; xi += 0.25)
    for (int j = -3; j <= 3; ++j)
      EXPECT_NEAR(model_symbol_Ma(pi, xi, j), model_symbol_Ma(pi, xi - 0.5, j - 1), 1e-14);
}

TEST(ModelSymbols, TanhSymbol)
{
  // the sign follows the transform convention F g = int g e^{-i t xi}; magnitude 2 pi tanh(pi)
  const cplx v = tanh_symbol(pi, 0.0, 1.0);
  EXPECT_NEAR(v.real(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v.imag()), 6.25976207126351713, 1e-13);
  EXPECT_NEAR(v.imag(), -2.0 * pi * std::tanh(pi), 1e-13);
  EXPECT_EQ(tanh_symbol(pi, 0.0, 0.0), cplx{});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double xi = u(rng);
    const cplx lhs = tanh_symbol(pi, 0.0, xi);
    const cplx rhs = cplx{0.0, -4.0 * pi} * (model_symbol_ma(pi, xi) - 0.5);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13);
  }
  EXPECT_THROW(tanh_symbol(pi, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(tanh_symbol(pi, -0.1, 0.0), std::invalid_argument);
}

TEST(ModelSymbols, TanhBoundedUnderRefinement)
{
  for (double kappa : {0.0, 0.3}) {
    double s1 = 0.0, s2 = 0.0;
    for (int i = -2000; i <= 2000; ++i)
      s1 = std::max(s1, std::abs(tanh_symbol(pi, kappa, 0.01 * i)));
    for (int i = -8000; i <= 8000; ++i)
      s2 = std::max(s2, std::abs(tanh_symbol(pi, kappa, 0.005 * i)));
    EXPECT_TRUE(std::isfinite(s1));
    EXPECT_LT(std::abs(s2 - s1) / s1, 0.01);
  }
}

TEST(StripShift, CentreIsZeroAndOutsideRejected)
{
  const WormParams w = make_params(2.0 * pi);
  const Grid2 g{make_log_grid(-40.0, 40.0, 1u << 10), make_angular_grid(2)};
  const HalfLineField phi = checks::packet_half_line(g, 2u);
  EXPECT_EQ(strip_shift_check(1, 1, phi, 0.5, w), 0.0);
  EXPECT_THROW(strip_shift_check(1, 1, phi, 0.5 + w.nu, w), std::invalid_argument);
}

TEST(StripShift, AllBlocksBothSides)
{
  const WormParams w = make_params(2.0 * pi);
  for (const auto &r : checks::multiplier_algebra(w))
    EXPECT_TRUE(r.pass) << r.name << " " << r.measured << " " << r.detail;
}
