#include "lorpe/baselines.hpp"
#include "lorpe/error.hpp"
#include "lorpe/expansion.hpp"
#include "lorpe/lorpe.hpp"
#include "lorpe/quadrature.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace lorpe;

namespace {

std::vector<double> exp_sample(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> E(1.0);
  std::vector<double> x(n);
  for (double& v : x)
    v = E(rng);
  return x;
}

LorpeConfig config(double h, double M, KernelSpec k, Support s = {})
{
  LorpeConfig c;
  c.h = h;
  c.M = M;
  c.kernel = k;
  c.support = s;
  return c;
}

//! Integral of u^j K_eff(u) by 64 panels of 30-point Gauss-Legendre.
double moment(const LorpeConfig& cfg, int j)
{
  const double a = cfg.kernel.effective_half_width();
  std::vector<double> u;
  std::vector<double> w;
  const auto& r = gauss_legendre(30);
  for (int p = 0; p < 64; ++p) {
    double lo = -a + 2.0 * a * p / 64.0;
    double hi = lo + 2.0 * a / 64.0;
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
      u.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * r.nodes[q]);
      w.push_back(0.5 * (hi - lo) * r.weights[q]);
    }
  }
  auto k = effective_kernel(cfg, 0.0, u);
  double s = 0.0;
  for (std::size_t q = 0; q < u.size(); ++q)
    s += w[q] * std::pow(u[q], j) * k[q];
  return s;
}

} // namespace

TEST(Lorpe, SingleCenteredPoint)
{
  auto cfg = config(1.0, 5.0, KernelSpec::gaussian());
  std::vector<double> x{ 0.0 };
  auto sys = system_at(0.0, cfg, 5);
  auto c = coefficients(x, 0.0, cfg, sys);
  EXPECT_NEAR(c[0], 0.3989422804014327, 1e-12);
  for (int k : { 1, 3, 5 })
    EXPECT_NEAR(c[static_cast<std::size_t>(k)], 0.0, 1e-14);
}

TEST(Lorpe, CoefficientsMatchDirectSum)
{
  auto x = exp_sample(5, 3);
  auto cfg = config(0.8, 4.0, KernelSpec::biweight(), { 0.0, std::numeric_limits<double>::infinity() });
  for (double xf : { 0.0, 0.3, 1.7 }) {
    auto sys = system_at(xf, cfg, 4);
    auto c = coefficients(x, xf, cfg, sys);
    for (int k = 0; k <= 4; ++k) {
      double s = 0.0;
      for (double xi : x) {
        double y = (xi - xf) / cfg.h;
        if (y >= sys.lower() && y <= sys.upper())
          s += sys(k, y) * sys.weight(y);
      }
      s /= 5.0 * cfg.h;
      EXPECT_NEAR(c[static_cast<std::size_t>(k)], s, 1e-14 * (1.0 + std::abs(s)));
    }
  }
}

TEST(Lorpe, MatchesGramSchmidtReference)
{
  const double inf = std::numeric_limits<double>::infinity();
  struct Case
  {
    KernelSpec k;
    oracle::Kernel ok;
    double h, M, lo, hi;
  };
  std::vector<Case> cases{
    { KernelSpec::gaussian(), { "gauss", 0 }, 0.7, 3.0, 0.0, inf },
    { KernelSpec::gaussian(), { "gauss", 0 }, 2.0, 2.5, 0.0, 3.0 },
    { KernelSpec::epanechnikov(), { "beta", 1.5 }, 0.9, 4.0, 0.0, inf },
    { KernelSpec::quadweight(), { "beta", 4.5 }, 3.0, 5.5, 0.0, inf },
    { KernelSpec::quadweight(), { "beta", 4.5 }, 1.5, 1.0, -inf, inf },
  };
  auto x = exp_sample(40, 17);
  for (const auto& c : cases) {
    auto cfg = config(c.h, c.M, c.k, { c.lo, c.hi });
    for (double xf : { 0.0, 0.05, 0.4, 1.1, 2.9 }) {
      double got = evaluate_raw(x, xf, cfg);
      double ref = static_cast<double>(oracle::lorpe(x, xf, xf, c.h, c.M, c.ok, c.lo, c.hi));
      EXPECT_NEAR(got, ref, 1e-9 * (1.0 + std::abs(ref))) << c.k.name() << " M " << c.M << " x " << xf;
      double off = xf + 0.3 * c.h;
      double got_off = local_expansion(x, xf, off, cfg);
      double ref_off = static_cast<double>(oracle::lorpe(x, xf, off, c.h, c.M, c.ok, c.lo, c.hi));
      EXPECT_NEAR(got_off, ref_off, 1e-9 * (1.0 + std::abs(ref_off)));
    }
  }
}

TEST(Lorpe, DegreeZeroInteriorIsKde)
{
  auto x = exp_sample(30, 5);
  for (auto k : { KernelSpec::gaussian(), KernelSpec::epanechnikov() })
    for (double M : { 0.0, 1.0 })
      for (double xf : { 0.5, 1.3, 2.0 }) {
        auto cfg = config(0.6, M, k);
        double kde = 0.0;
        for (double xi : x)
          kde += k((xf - xi) / 0.6);
        kde /= 30.0 * 0.6;
        EXPECT_NEAR(evaluate_raw(x, xf, cfg), kde, 1e-12);
      }
}

TEST(Lorpe, FrozenBoundaryValue)
{
  // epanechnikov on [0, inf), one point at 0.5, h = 1: K(0.5) / (1/2)
  auto cfg = config(1.0, 0.0, KernelSpec::epanechnikov(), { 0.0, std::numeric_limits<double>::infinity() });
  std::vector<double> x{ 0.5 };
  EXPECT_NEAR(evaluate_raw(x, 0.0, cfg), 1.125, 1e-12);
}

TEST(Lorpe, EmptyWindowIsZero)
{
  auto cfg = config(0.1, 3.0, KernelSpec::triweight());
  std::vector<double> x{ 5.0, 6.0 };
  EXPECT_EQ(evaluate_raw(x, 0.0, cfg), 0.0);
}

TEST(Lorpe, BoundaryEffectiveKernelForm)
{
  std::vector<double> x{ 0.05, 0.4, 0.9 };
  auto cfg = config(0.5, 2.0, KernelSpec::gaussian(), { 0.0, 1.0 });
  for (double xf : { 0.0, 0.2, 1.0 }) {
    std::vector<double> u;
    for (double xi : x)
      u.push_back((xf - xi) / cfg.h);
    auto k = effective_kernel(cfg, xf, u);
    double s = 0.0;
    for (double v : k)
      s += v;
    s /= 3.0 * cfg.h;
    EXPECT_NEAR(evaluate_raw(x, xf, cfg), s, 1e-12);
  }
}

TEST(Lorpe, InteriorEffectiveKernelOrder)
{
  for (auto k : { KernelSpec::gaussian(), KernelSpec::epanechnikov() })
    for (int M = 0; M <= 8; ++M) {
      auto cfg = config(1.0, M, k);
      EXPECT_NEAR(moment(cfg, 0), 1.0, 1e-8) << k.name() << " " << M;
      int top = M % 2 ? M : M + 1;
      for (int j = 1; j <= top; ++j)
        EXPECT_NEAR(moment(cfg, j), 0.0, 1e-6) << k.name() << " M " << M << " j " << j;
      EXPECT_GT(std::abs(moment(cfg, top + 1)), 1e-5) << k.name() << " " << M;
      std::vector<double> u, mu;
      const double reach = k.is_compact() ? 0.95 : 4.5;
      for (int i = 1; i <= 50; ++i) {
        u.push_back(reach * i / 50.0);
        mu.push_back(-u.back());
      }
      auto a = effective_kernel(cfg, 0.0, u);
      auto b = effective_kernel(cfg, 0.0, mu);
      for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_NEAR(a[i], b[i], 1e-10);
    }
}

TEST(Lorpe, DegreeZeroEffectiveKernelIsKernel)
{
  auto cfg = config(1.0, 0.0, KernelSpec::biweight());
  std::vector<double> u{ -0.9, -0.2, 0.0, 0.55 };
  auto k = effective_kernel(cfg, 0.0, u);
  for (std::size_t i = 0; i < u.size(); ++i)
    EXPECT_NEAR(k[i], KernelSpec::biweight()(u[i]), 1e-13);
}

TEST(Lorpe, BoundaryEffectiveKernelIsOneSided)
{
  auto cfg = config(0.1, 4.0, KernelSpec::gaussian(), { 0.0, 1.0 });
  std::vector<double> u{ -10.5, -9.0, -2.0, -0.5, 0.0, 0.5, 3.0 };
  auto k = effective_kernel(cfg, 0.0, u);
  EXPECT_EQ(k[0], 0.0);
  EXPECT_NE(k[1], 0.0);
  EXPECT_NE(k[3], 0.0);
  EXPECT_EQ(k[5], 0.0);
  EXPECT_EQ(k[6], 0.0);
  // the boundary kernel peaks above the interior one to restore mass
  EXPECT_GT(k[4], 0.3989422804014327);
}

TEST(Lorpe, LargeBandwidthIsLegendreSeries)
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> x(200);
  for (double& v : x)
    v = U(rng) * U(rng);
  std::vector<double> pts;
  for (int i = 0; i <= 40; ++i)
    pts.push_back(i / 40.0);
  for (int M = 0; M <= 6; ++M) {
    auto cfg = config(1e6, M, KernelSpec::quadweight(), { 0.0, 1.0 });
    auto ref = legendre_osde_raw(x, 0.0, 1.0, M, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
      EXPECT_NEAR(evaluate_raw(x, pts[i], cfg), ref[i], 1e-6) << "M " << M << " x " << pts[i];
  }
}

TEST(Lorpe, EstimateIntegratesToOne)
{
  auto x = exp_sample(200, 9);
  auto cfg = config(4.1, 2.0, KernelSpec::quadweight(), { 0.0, std::numeric_limits<double>::infinity() });
  auto grid = uniform_grid(0.0, 15.0, 1024);
  auto est = estimate_on_grid(x, cfg, grid);
  EXPECT_NEAR(trapezoid(est.grid, est.value), 1.0, 1e-9);
  for (double v : est.value)
    EXPECT_GE(v, 0.0);

  std::vector<double> same(10, 2.0);
  auto c2 = config(0.3, 2.0, KernelSpec::epanechnikov());
  auto e2 = estimate_on_grid(same, c2);
  EXPECT_NEAR(trapezoid(e2.grid, e2.value), 1.0, 1e-9);
  EXPECT_GT(e2(2.0), e2(2.2));
}

TEST(Lorpe, SerialAndParallelAreBitIdentical)
{
  auto x = exp_sample(300, 31);
  auto cfg = config(2.0, 3.5, KernelSpec::quadweight(), { 0.0, std::numeric_limits<double>::infinity() });
  auto grid = default_grid(x, cfg.support, cfg.h, cfg.kernel);
  auto a = estimate_on_grid(x, cfg, grid, Execution::serial);
  auto b = estimate_on_grid(x, cfg, grid, Execution::parallel);
  ASSERT_EQ(a.raw.size(), b.raw.size());
  for (std::size_t i = 0; i < a.raw.size(); ++i)
    ASSERT_EQ(a.raw[i], b.raw[i]);
  ExpansionTable::Options o;
  o.max_degree = 6;
  o.exec = Execution::serial;
  ExpansionTable ts(x, cfg, grid, o);
  o.exec = Execution::parallel;
  ExpansionTable tp(x, cfg, grid, o);
  EXPECT_EQ(ts.raw(4.25), tp.raw(4.25));
}

TEST(Lorpe, ExpansionTableMatchesDirectPath)
{
  auto x = exp_sample(60, 41);
  auto cfg = config(1.2, 2.5, KernelSpec::biweight(), { 0.0, std::numeric_limits<double>::infinity() });
  auto grid = uniform_grid(0.0, 6.0, 97);
  ExpansionTable::Options o;
  o.max_degree = 5;
  ExpansionTable t(x, cfg, grid, o);
  for (double M : { 0.0, 2.5, 4.75 }) {
    auto raw = t.raw(M);
    auto c = cfg;
    c.M = M;
    for (std::size_t g = 0; g < grid.size(); g += 8) {
      EXPECT_NEAR(raw[g], evaluate_raw(x, grid[g], c), 1e-12);
      EXPECT_NEAR(t.expand(g, grid[g] + 0.1, M), local_expansion(x, grid[g], grid[g] + 0.1, c), 1e-12);
    }
  }
  EXPECT_EQ(t.nearest(0.03), 0u);
  EXPECT_EQ(t.nearest(100.0), grid.size() - 1);
  EXPECT_THROW(t.raw(5.5), Error);
}

TEST(Lorpe, MirrorModeAgreesInTheInterior)
{
  auto x = exp_sample(50, 43);
  auto clip = config(0.5, 3.0, KernelSpec::epanechnikov(), { 0.0, std::numeric_limits<double>::infinity() });
  auto mirror = clip;
  mirror.boundary_mode = BoundaryMode::kernel_mirror;
  EXPECT_NEAR(evaluate_raw(x, 2.0, clip), evaluate_raw(x, 2.0, mirror), 1e-12);
  EXPECT_NE(evaluate_raw(x, 0.1, clip), evaluate_raw(x, 0.1, mirror));
}

TEST(Lorpe, ErrorsAndFinalize)
{
  auto bad = [](LorpeConfig c) {
    try {
      c.validate();
    } catch (const Error& e) {
      return e.code() == ErrorCode::invalid_argument;
    }
    return false;
  };
  EXPECT_TRUE(bad(config(0.0, 1.0, KernelSpec::gaussian())));
  EXPECT_TRUE(bad(config(1.0, -1.0, KernelSpec::gaussian())));
  EXPECT_TRUE(bad(config(1.0, 1.0, KernelSpec::gaussian(), { 1.0, 1.0 })));
  try {
    finalize_density({ 0.0, 1.0, 2.0 }, { -1.0, -2.0, 0.0 });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::all_zero_density);
  }
  auto d = finalize_density({ 0.0, 1.0, 2.0 }, { 1.0, 2.0, -1.0 });
  EXPECT_NEAR(d.norm_constant, 1.5 + 1.0, 1e-15);
  EXPECT_NEAR(d(0.5), 1.5 / 2.5, 1e-15);
  EXPECT_EQ(d(2.5), 0.0);
}
