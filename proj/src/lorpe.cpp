#include "lorpe/lorpe.hpp"
#include "lorpe/error.hpp"
#include "lorpe/expansion.hpp"
#include "lorpe/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace lorpe {

void LorpeConfig::validate() const
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::invalid_argument, "bandwidth must be positive and finite");
  if (!(M >= 0.0) || !std::isfinite(M))
    throw Error(ErrorCode::invalid_argument, "degree must be finite and >= 0");
  if (!(support.lo < support.hi))
    throw Error(ErrorCode::invalid_argument, "support needs lo < hi");
}

double DensityEstimate::operator()(double x) const
{
  if (grid.empty() || x < grid.front() || x > grid.back())
    return 0.0;
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.end())
    return value.back();
  auto i = static_cast<std::size_t>(it - grid.begin());
  double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return (1.0 - t) * value[i - 1] + t * value[i];
}

DensityEstimate finalize_density(std::vector<double> grid, std::vector<double> raw)
{
  DensityEstimate est;
  est.value.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    est.value[i] = std::max(0.0, raw[i]);
  double z = trapezoid(grid, est.value);
  if (!(z > 0.0))
    throw Error(ErrorCode::all_zero_density, "estimate is nonpositive on the whole grid");
  for (double& v : est.value)
    v /= z;
  est.norm_constant = z;
  est.grid = std::move(grid);
  est.raw = std::move(raw);
  return est;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n)
{
  if (n < 2 || !(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::invalid_argument, "grid needs n >= 2 and finite lo < hi");
  std::vector<double> g(n);
  double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<double> default_grid(std::span<const double> sample,
                                 const Support& support,
                                 double h,
                                 const KernelSpec& kernel,
                                 std::size_t n)
{
  if (sample.empty())
    throw Error(ErrorCode::invalid_argument, "empty sample");
  auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
  double reach = kernel.effective_half_width() * h;
  double lo = support.finite_lo() ? support.lo : *mn - reach;
  double hi = support.finite_hi() ? support.hi : *mx + reach;
  return uniform_grid(lo, hi, n);
}

PolySystem system_at(double x_fit, const LorpeConfig& cfg, int max_degree)
{
  cfg.validate();
  return build_system(cfg.kernel,
                      (cfg.support.lo - x_fit) / cfg.h,
                      (cfg.support.hi - x_fit) / cfg.h,
                      max_degree,
                      cfg.boundary_mode);
}

std::vector<double> coefficients(std::span<const double> sample,
                                 double x_fit,
                                 const LorpeConfig& cfg,
                                 const PolySystem& sys)
{
  if (sample.empty())
    throw Error(ErrorCode::invalid_argument, "empty sample");
  const int m = sys.max_degree();
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> p(c.size());
  for (double xi : sample) {
    double y = (xi - x_fit) / cfg.h;
    if (y < sys.lower() || y > sys.upper())
      continue;
    double w = sys.weight(y);
    if (w == 0.0)
      continue;
    sys.evaluate(y, p);
    for (std::size_t k = 0; k < c.size(); ++k)
      c[k] += p[k] * w;
  }
  double scale = 1.0 / (static_cast<double>(sample.size()) * cfg.h);
  for (double& v : c)
    v *= scale;
  return c;
}

double local_expansion(std::span<const double> sample, double x_fit, double x, const LorpeConfig& cfg)
{
  cfg.validate();
  Taper taper = Taper::from_degree(cfg.M);
  PolySystem sys = system_at(x_fit, cfg, taper.max_degree());
  auto c = coefficients(sample, x_fit, cfg, sys);
  std::vector<double> p(c.size());
  sys.evaluate((x - x_fit) / cfg.h, p);
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    s += taper[static_cast<int>(k)] * c[k] * p[k];
  return s;
}

double evaluate_raw(std::span<const double> sample, double x_fit, const LorpeConfig& cfg)
{
  if (!cfg.support.contains(x_fit))
    throw Error(ErrorCode::invalid_argument, "fit point outside the support");
  return local_expansion(sample, x_fit, x_fit, cfg);
}

DensityEstimate estimate_on_grid(std::span<const double> sample,
                                 const LorpeConfig& cfg,
                                 std::span<const double> grid,
                                 Execution exec)
{
  cfg.validate();
  if (grid.size() < 2)
    throw Error(ErrorCode::invalid_argument, "grid needs at least two points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!cfg.support.contains(grid[i]))
      throw Error(ErrorCode::invalid_argument, "grid point outside the support");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(ErrorCode::invalid_argument, "grid must be strictly increasing");
  }
  ExpansionTable::Options opts;
  opts.max_degree = degrees_needed(cfg.M);
  opts.exec = exec;
  ExpansionTable table(sample, cfg, std::vector<double>(grid.begin(), grid.end()), opts);
  return finalize_density(table.grid(), table.raw(cfg.M));
}

DensityEstimate estimate_on_grid(std::span<const double> sample, const LorpeConfig& cfg)
{
  auto grid = default_grid(sample, cfg.support, cfg.h, cfg.kernel);
  return estimate_on_grid(sample, cfg, grid);
}

std::vector<double> effective_kernel(const LorpeConfig& cfg, double x_fit, std::span<const double> u)
{
  Taper taper = Taper::from_degree(cfg.M);
  PolySystem sys = system_at(x_fit, cfg, taper.max_degree());
  std::vector<double> at0(static_cast<std::size_t>(taper.max_degree()) + 1);
  sys.evaluate(0.0, at0);
  std::vector<double> p(at0.size());
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    double y = -u[j];
    if (y < sys.lower() || y > sys.upper())
      continue;
    sys.evaluate(y, p);
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
      s += taper[static_cast<int>(k)] * at0[k] * p[k];
    out[j] = s * sys.weight(y);
  }
  return out;
}

} // namespace lorpe
