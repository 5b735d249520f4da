#include "lorpe/baselines.hpp"
#include "lorpe/error.hpp"
#include "lorpe/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace lorpe;

namespace {

std::vector<double> draws(std::size_t n, std::uint64_t seed, bool normal)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x)
    v = normal ? N(rng) : U(rng);
  return x;
}

} // namespace

TEST(Kde, FrozenValues)
{
  std::vector<double> one{ 0.0 };
  std::vector<double> at{ 0.0 };
  EXPECT_NEAR(kde_raw(one, 1.0, KernelSpec::gaussian(), std::nullopt, at)[0], 0.3989422804014327, 1e-15);
  std::vector<double> near_edge{ 0.1 };
  // reflection about 0: phi(0.1) + phi(-0.1)
  EXPECT_NEAR(kde_raw(near_edge, 1.0, KernelSpec::gaussian(), 0.0, at)[0], 0.7939050949540236, 1e-14);
  std::vector<double> pts{ -0.5, 0.25 };
  std::vector<double> x{ 0.0 };
  double ref = (KernelSpec::epanechnikov()(0.5 / 0.8) + KernelSpec::epanechnikov()(-0.25 / 0.8)) / (2.0 * 0.8);
  EXPECT_NEAR(kde_raw(pts, 0.8, KernelSpec::epanechnikov(), std::nullopt, x)[0], ref, 1e-15);
}

TEST(Kde, SecondOrderMatchesPlainKde)
{
  auto x = draws(80, 3, true);
  auto grid = uniform_grid(-4.0, 4.0, 201);
  auto a = kde_estimate(x, 0.5, KernelSpec::quadweight(), std::nullopt, grid);
  auto b = kde_highorder_estimate(x, 0.5, KernelSpec::quadweight(), 2, std::nullopt, grid);
  for (std::size_t g = 0; g < grid.size(); ++g)
    EXPECT_NEAR(a.value[g], b.value[g], 1e-12);
}

TEST(Kde, EffectiveKernelSum)
{
  auto x = draws(50, 5, true);
  auto grid = uniform_grid(-3.0, 3.0, 61);
  const double h = 0.9;
  auto est = kde_effective_estimate(x, h, KernelSpec::gaussian(), 4.0, std::nullopt, grid);
  LorpeConfig cfg;
  cfg.h = h;
  cfg.M = 4.0;
  std::vector<double> raw(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> u;
    for (double xi : x)
      u.push_back((grid[g] - xi) / h);
    for (double k : effective_kernel(cfg, 0.0, u))
      raw[g] += k;
    raw[g] /= 50.0 * h;
  }
  for (std::size_t g = 0; g < grid.size(); ++g)
    EXPECT_NEAR(est.raw[g], raw[g], 1e-12);
}

TEST(Kde, MirrorGridStaysOnDataSide)
{
  std::vector<double> x{ 0.2, 0.5, 1.4 };
  auto g = kde_grid(x, 0.3, KernelSpec::epanechnikov(), {}, 0.0);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_NEAR(g.back(), 1.7, 1e-12);
  auto est = kde_estimate(x, 0.3, KernelSpec::epanechnikov(), { 0.0, std::numeric_limits<double>::infinity() }, 0.0);
  EXPECT_NEAR(trapezoid(est.grid, est.value), 1.0, 1e-12);
}

TEST(Osde, MapFrozen)
{
  std::vector<double> x{ 2.0, 6.0, 3.0, 4.0 };
  auto m = OsdeMap::from_sample(x);
  EXPECT_DOUBLE_EQ(m.to_u(2.0), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(m.to_u(6.0), 1.0 - 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(m.to_x(m.to_u(3.3)), 3.3);
  EXPECT_DOUBLE_EQ(m.slope(), 0.75 / 4.0);
}

TEST(Osde, DiscreteLegendreIsOrthonormal)
{
  const std::size_t G = 512;
  auto basis = discrete_legendre(G, 10);
  auto u = osde_unit_grid(G);
  for (int j = 0; j <= 10; ++j)
    for (int k = 0; k <= j; ++k) {
      double s = 0.0;
      for (double v : u)
        s += basis(j, v) * basis(k, v) / static_cast<double>(G);
      EXPECT_NEAR(s, j == k ? 1.0 : 0.0, 1e-12);
    }
  // close to the continuous shifted Legendre polynomials
  EXPECT_NEAR(basis(1, 0.9), std::sqrt(3.0) * 0.8, 1e-4);
  EXPECT_NEAR(basis(2, 0.25), std::sqrt(5.0) * (3.0 * 0.25 - 1.0) / 2.0, 1e-4);
}

TEST(Osde, ConstantTermIsUniform)
{
  auto x = draws(100, 9, true);
  OsdeConfig cfg;
  cfg.J = 0;
  auto est = osde_estimate(x, cfg);
  auto m = OsdeMap::from_sample(x);
  double width = m.to_x(1.0) - m.to_x(0.0);
  for (std::size_t g = 0; g < est.value.size(); g += 97)
    EXPECT_NEAR(est.value[g], 1.0 / width, 1e-3 / width);
  EXPECT_NEAR(trapezoid(est.grid, est.value), 1.0, 1e-12);
}

TEST(Osde, TermSelection)
{
  int small = 0;
  for (std::uint64_t s = 0; s < 20; ++s)
    small += select_osde_terms(draws(500, 100 + s, false)) <= 2;
  EXPECT_GE(small, 17);
  auto x = draws(500, 77, true);
  int J = select_osde_terms(x);
  EXPECT_GT(J, 2);
  OsdeConfig cfg;
  cfg.J = J;
  auto est = osde_estimate(x, cfg);
  EXPECT_NEAR(trapezoid(est.grid, est.value), 1.0, 1e-12);
}

TEST(Osde, Errors)
{
  std::vector<double> same{ 1.0, 1.0, 1.0 };
  try {
    osde_estimate(same, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_sample);
  }
  std::vector<double> one{ 1.0 };
  EXPECT_THROW(osde_estimate(one, {}), Error);
  EXPECT_THROW(discrete_legendre(8, 8), Error);
}

TEST(Osde, ContinuousLegendreConstantTerm)
{
  std::vector<double> x{ 0.2, 0.7 };
  std::vector<double> at{ 0.0, 0.5, 2.0 };
  auto v = legendre_osde_raw(x, 0.0, 2.0, 0, at);
  for (double f : v)
    EXPECT_NEAR(f, 0.5, 1e-15);
  // one linear term: theta_1 phi_1(x) with phi_1 = sqrt(3/2) (x - 1)
  auto w = legendre_osde_raw(x, 0.0, 2.0, 1, at);
  double theta1 = 1.5 * ((0.2 - 1.0) + (0.7 - 1.0)) / 2.0;
  EXPECT_NEAR(w[2], 0.5 + theta1 * 1.0, 1e-14);
}
