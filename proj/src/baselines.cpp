#include "lorpe/baselines.hpp"
#include "lorpe/error.hpp"
#include "lorpe/expansion.hpp"

#include <algorithm>
#include <cmath>

namespace lorpe {

namespace {

std::vector<double> with_reflection(std::span<const double> sample, std::optional<double> mirror)
{
  std::vector<double> out(sample.begin(), sample.end());
  if (mirror)
    for (double x : sample)
      out.push_back(2.0 * *mirror - x);
  return out;
}

} // namespace

std::vector<double> kde_raw(std::span<const double> sample,
                            double h,
                            const KernelSpec& kernel,
                            std::optional<double> mirror,
                            std::span<const double> grid)
{
  if (!(h > 0.0))
    throw Error(ErrorCode::invalid_argument, "bandwidth must be positive");
  if (sample.empty())
    throw Error(ErrorCode::invalid_argument, "empty sample");
  auto pts = with_reflection(sample, mirror);
  const double scale = 1.0 / (static_cast<double>(sample.size()) * h);
  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double s = 0.0;
    for (double xi : pts)
      s += kernel((grid[g] - xi) / h);
    out[g] = s * scale;
  }
  return out;
}

DensityEstimate kde_estimate(std::span<const double> sample,
                             double h,
                             const KernelSpec& kernel,
                             std::optional<double> mirror,
                             std::span<const double> grid)
{
  return finalize_density(std::vector<double>(grid.begin(), grid.end()),
                          kde_raw(sample, h, kernel, mirror, grid));
}

std::vector<double> kde_grid(std::span<const double> sample,
                             double h,
                             const KernelSpec& kernel,
                             const Support& support,
                             std::optional<double> mirror,
                             std::size_t n)
{
  Support s = support;
  if (mirror) {
    if (sample.empty())
      throw Error(ErrorCode::invalid_argument, "empty sample");
    // the estimate lives on the side of the mirror point holding the data
    if (*std::min_element(sample.begin(), sample.end()) >= *mirror)
      s.lo = *mirror;
    else
      s.hi = *mirror;
  }
  return default_grid(sample, s, h, kernel, n);
}

DensityEstimate kde_estimate(std::span<const double> sample,
                             double h,
                             const KernelSpec& kernel,
                             const Support& support,
                             std::optional<double> mirror)
{
  auto grid = kde_grid(sample, h, kernel, support, mirror);
  return kde_estimate(sample, h, kernel, mirror, grid);
}

DensityEstimate kde_effective_estimate(std::span<const double> sample,
                                       double h,
                                       const KernelSpec& kernel,
                                       double M,
                                       std::optional<double> mirror,
                                       std::span<const double> grid,
                                       Execution exec)
{
  if (sample.empty())
    throw Error(ErrorCode::invalid_argument, "empty sample");
  LorpeConfig cfg;
  cfg.h = h;
  cfg.M = M;
  cfg.kernel = kernel;
  ExpansionTable::Options opts;
  opts.max_degree = degrees_needed(M);
  opts.exec = exec;
  opts.interior_only = true;
  opts.norm_count = sample.size();
  auto pts = with_reflection(sample, mirror);
  ExpansionTable table(pts, cfg, std::vector<double>(grid.begin(), grid.end()), opts);
  return finalize_density(table.grid(), table.raw(M));
}

DensityEstimate kde_highorder_estimate(std::span<const double> sample,
                                       double h,
                                       const KernelSpec& kernel,
                                       int r,
                                       std::optional<double> mirror,
                                       std::span<const double> grid)
{
  if (r < 2 || r % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "kernel order must be even and >= 2");
  return kde_effective_estimate(sample, h, kernel, r - 2, mirror, grid);
}

OsdeMap OsdeMap::from_sample(std::span<const double> sample)
{
  if (sample.size() < 2)
    throw Error(ErrorCode::invalid_argument, "OSDE needs at least 2 points");
  auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
  if (!(*mn < *mx))
    throw Error(ErrorCode::degenerate_sample, "all sample points coincide");
  return OsdeMap{ *mn, *mx, sample.size() };
}

double OsdeMap::slope() const
{
  double n = static_cast<double>(this->n);
  return (1.0 - 1.0 / n) / (x_max - x_min);
}

double OsdeMap::to_u(double x) const
{
  return 0.5 / static_cast<double>(n) + (x - x_min) * slope();
}

double OsdeMap::to_x(double u) const
{
  return x_min + (u - 0.5 / static_cast<double>(n)) / slope();
}

std::vector<double> osde_unit_grid(std::size_t grid_size)
{
  if (grid_size < 2)
    throw Error(ErrorCode::invalid_argument, "OSDE grid needs at least 2 points");
  std::vector<double> u(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g)
    u[g] = (static_cast<double>(g) + 0.5) / static_cast<double>(grid_size);
  return u;
}

Recurrence discrete_legendre(std::size_t grid_size, int max_degree)
{
  if (max_degree < 0 || static_cast<std::size_t>(max_degree) >= grid_size)
    throw Error(ErrorCode::invalid_argument, "OSDE degree must be in [0, grid_size)");
  auto u = osde_unit_grid(grid_size);
  std::vector<double> w(grid_size, 1.0 / static_cast<double>(grid_size));
  return stieltjes(u, w, max_degree);
}

std::vector<double> osde_coefficients(std::span<const double> sample, const Recurrence& basis)
{
  OsdeMap map = OsdeMap::from_sample(sample);
  std::vector<double> theta(static_cast<std::size_t>(basis.max_degree()) + 1, 0.0);
  std::vector<double> p(theta.size());
  for (double x : sample) {
    basis.evaluate(map.to_u(x), p);
    for (std::size_t j = 0; j < p.size(); ++j)
      theta[j] += p[j];
  }
  for (double& t : theta)
    t /= static_cast<double>(sample.size());
  return theta;
}

DensityEstimate osde_estimate(std::span<const double> sample, const OsdeConfig& cfg)
{
  if (cfg.J < 0)
    throw Error(ErrorCode::invalid_argument, "OSDE term count must be >= 0");
  OsdeMap map = OsdeMap::from_sample(sample);
  Recurrence basis = discrete_legendre(cfg.grid_size, cfg.J);
  auto theta = osde_coefficients(sample, basis);
  auto u = osde_unit_grid(cfg.grid_size);
  std::vector<double> x(u.size());
  std::vector<double> raw(u.size());
  std::vector<double> p(theta.size());
  const double du_dx = map.slope();
  for (std::size_t g = 0; g < u.size(); ++g) {
    basis.evaluate(u[g], p);
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
      s += theta[j] * p[j];
    x[g] = map.to_x(u[g]);
    raw[g] = s * du_dx;
  }
  return finalize_density(std::move(x), std::move(raw));
}

int select_osde_terms(std::span<const double> sample, int J_max, std::size_t grid_size)
{
  if (J_max < 1)
    throw Error(ErrorCode::invalid_argument, "J_max must be >= 1");
  OsdeMap map = OsdeMap::from_sample(sample);
  Recurrence basis = discrete_legendre(grid_size, J_max);
  const std::size_t n = sample.size();
  const std::size_t S = static_cast<std::size_t>(J_max) + 1;
  std::vector<double> sum(S, 0.0);
  std::vector<double> sum2(S, 0.0);
  std::vector<double> p(S);
  for (double x : sample) {
    basis.evaluate(map.to_u(x), p);
    for (std::size_t j = 0; j < S; ++j) {
      sum[j] += p[j];
      sum2[j] += p[j] * p[j];
    }
  }
  const double nd = static_cast<double>(n);
  int J = 0;
  int misses = 0;
  for (int j = 1; j <= J_max; ++j) {
    auto k = static_cast<std::size_t>(j);
    double theta = sum[k] / nd;
    double var = (sum2[k] - nd * theta * theta) / (nd - 1.0);
    if (nd * theta * theta > 2.0 * var) {
      J = j;
      misses = 0;
    } else if (++misses == 2) {
      break;
    }
  }
  return J;
}

std::vector<double> legendre_osde_raw(std::span<const double> sample,
                                      double a,
                                      double b,
                                      int J,
                                      std::span<const double> x)
{
  if (!(a < b) || J < 0 || sample.empty())
    throw Error(ErrorCode::invalid_argument, "legendre_osde_raw needs a < b, J >= 0, data");
  auto phi = [&](unsigned j, double v) {
    return std::sqrt((2.0 * j + 1.0) / (b - a)) * std::legendre(j, (2.0 * v - a - b) / (b - a));
  };
  std::vector<double> theta(static_cast<std::size_t>(J) + 1, 0.0);
  for (double xi : sample)
    for (unsigned j = 0; j <= static_cast<unsigned>(J); ++j)
      theta[j] += phi(j, xi);
  for (double& t : theta)
    t /= static_cast<double>(sample.size());
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t q = 0; q < x.size(); ++q)
    for (unsigned j = 0; j <= static_cast<unsigned>(J); ++j)
      out[q] += theta[j] * phi(j, x[q]);
  return out;
}

} // namespace lorpe
