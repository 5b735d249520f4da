#include "lorpe/tuning.hpp"
#include "lorpe/error.hpp"
#include "lorpe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>

namespace lorpe {

namespace {

double factorial(int k)
{
  return std::tgamma(k + 1.0);
}

void check_order(int r)
{
  if (r < 2 || r % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "kernel orders must be even and >= 2");
}

double tapered_sum(std::span<const double> terms, const Taper& taper)
{
  const int top = std::min(taper.max_degree(), static_cast<int>(terms.size()) - 1);
  double s = 0.0;
  for (int k = 0; k <= top; ++k)
    s += taper[k] * terms[static_cast<std::size_t>(k)];
  return s;
}

struct LocalTerms
{
  std::vector<double> full; // c_k P_k(z)
  std::vector<double> plus; // P_k(y_i) w(y_i) P_k(z) / (n h)
};

LocalTerms local_terms(std::span<const double> sample,
                       std::size_t i,
                       double x,
                       const LorpeConfig& cfg,
                       const CvOptions& opts)
{
  cfg.validate();
  if (i >= sample.size())
    throw Error(ErrorCode::invalid_argument, "sample index out of range");
  const double g = fit_point_for(x, sample, cfg, opts);
  const int m = degrees_needed(cfg.M);
  PolySystem sys = system_at(g, cfg, m);
  auto c = coefficients(sample, g, cfg, sys);

  std::vector<double> pz(c.size());
  sys.evaluate((x - g) / cfg.h, pz);
  LocalTerms t{ std::vector<double>(c.size()), std::vector<double>(c.size(), 0.0) };
  for (std::size_t k = 0; k < c.size(); ++k)
    t.full[k] = c[k] * pz[k];

  double yi = (sample[i] - g) / cfg.h;
  if (yi >= sys.lower() && yi <= sys.upper()) {
    std::vector<double> pi(c.size());
    sys.evaluate(yi, pi);
    double scale = sys.weight(yi) / (static_cast<double>(sample.size()) * cfg.h);
    for (std::size_t k = 0; k < c.size(); ++k)
      t.plus[k] = pi[k] * scale * pz[k];
  }
  return t;
}

} // namespace

KernelMoments effective_kernel_moments(const KernelSpec& kernel, int r)
{
  check_order(r);
  LorpeConfig cfg;
  cfg.kernel = kernel;
  cfg.M = r - 1;
  // panelled Gauss-Legendre over the kernel support
  const double lim = kernel.effective_half_width();
  const std::size_t panels = 32;
  const auto& rule = gauss_legendre(64);
  std::vector<double> u;
  std::vector<double> w;
  for (std::size_t p = 0; p < panels; ++p) {
    double lo = -lim + 2.0 * lim * static_cast<double>(p) / panels;
    double hi = -lim + 2.0 * lim * static_cast<double>(p + 1) / panels;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      u.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q]);
      w.push_back(0.5 * (hi - lo) * rule.weights[q]);
    }
  }
  auto k = effective_kernel(cfg, 0.0, u);
  KernelMoments m;
  m.order = r;
  for (std::size_t q = 0; q < u.size(); ++q) {
    m.mu += w[q] * std::pow(u[q], r) * k[q];
    m.R += w[q] * k[q] * k[q];
  }
  return m;
}

double normal_reference_amise(int r, double sigma, std::size_t n, const KernelMoments& m)
{
  check_order(r);
  const double rd = r;
  double inner = 2.0 * rd * factorial(2 * r) / (std::pow(factorial(r), 3) * std::sqrt(std::numbers::pi)) *
                 m.mu * m.mu * std::pow(m.R / static_cast<double>(n), 2.0 * rd);
  return (2.0 * rd + 1.0) / (4.0 * rd * sigma) * std::pow(inner, 1.0 / (2.0 * rd + 1.0));
}

double normal_reference_bandwidth(int r, double sigma, std::size_t n, const KernelMoments& m)
{
  check_order(r);
  const double rd = r;
  double inner = std::pow(factorial(r), 3) * std::sqrt(std::numbers::pi) /
                 (2.0 * rd * factorial(2 * r) * static_cast<double>(n)) * m.R / (m.mu * m.mu);
  return 2.0 * sigma * std::pow(inner, 1.0 / (2.0 * rd + 1.0));
}

double sample_sd(std::span<const double> sample)
{
  if (sample.size() < 2)
    return 0.0;
  double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(sample.size());
  double ss = 0.0;
  for (double x : sample)
    ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(sample.size() - 1));
}

PluginResult plug_in(std::span<const double> sample,
                     const KernelSpec& kernel,
                     std::span<const int> r_range,
                     DegreeRule rule)
{
  if (r_range.empty())
    throw Error(ErrorCode::invalid_argument, "empty order range");
  PluginResult res;
  res.sigma_hat = sample_sd(sample);
  if (!(res.sigma_hat > 0.0))
    throw Error(ErrorCode::degenerate_sample, "sample standard deviation is zero");
  if (sample.size() < 3)
    throw Error(ErrorCode::invalid_argument, "plug-in needs at least 3 points");

  double best = std::numeric_limits<double>::infinity();
  KernelMoments best_m;
  for (int r : r_range) {
    KernelMoments m = effective_kernel_moments(kernel, r);
    double a = normal_reference_amise(r, res.sigma_hat, sample.size(), m);
    res.amise_curve[r] = a;
    if (a < best) {
      best = a;
      best_m = m;
      res.r_hat = r;
    }
  }
  res.h_hat = normal_reference_bandwidth(res.r_hat, res.sigma_hat, sample.size(), best_m);
  if (rule == DegreeRule::case_table)
    res.M_hat = res.r_hat % 2 == 0 ? res.r_hat + 1 : res.r_hat + 2;
  else
    res.M_hat = res.r_hat - 2;
  return res;
}

PluginResult plug_in(std::span<const double> sample, const KernelSpec& kernel, DegreeRule rule)
{
  static constexpr int orders[] = { 2, 4, 6, 8 };
  return plug_in(sample, kernel, orders, rule);
}

double fit_point_for(double x, std::span<const double> sample, const LorpeConfig& cfg, const CvOptions& opts)
{
  if (opts.fit_point == FitPoint::exact)
    return x;
  auto grid = default_grid(sample, cfg.support, cfg.h, cfg.kernel, opts.grid_size);
  auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it == grid.begin())
    return grid.front();
  if (it == grid.end())
    return grid.back();
  return (x - *(it - 1) <= *it - x) ? *(it - 1) : *it;
}

double full_value(std::span<const double> sample, double x, const LorpeConfig& cfg, const CvOptions& opts)
{
  auto t = local_terms(sample, 0, x, cfg, opts);
  return tapered_sum(t.full, Taper::from_degree(cfg.M));
}

double plus_i_value(std::span<const double> sample,
                    std::size_t i,
                    double x,
                    const LorpeConfig& cfg,
                    const CvOptions& opts)
{
  auto t = local_terms(sample, i, x, cfg, opts);
  return tapered_sum(t.plus, Taper::from_degree(cfg.M));
}

double loo_value(std::span<const double> sample,
                 std::size_t i,
                 double x,
                 const LorpeConfig& cfg,
                 const CvOptions& opts)
{
  if (sample.size() < 2)
    throw Error(ErrorCode::invalid_argument, "leave-one-out needs n >= 2");
  auto t = local_terms(sample, i, x, cfg, opts);
  Taper taper = Taper::from_degree(cfg.M);
  double n = static_cast<double>(sample.size());
  return n / (n - 1.0) * (tapered_sum(t.full, taper) - tapered_sum(t.plus, taper));
}

std::string CvCriterion::name() const
{
  return kind == Kind::lscv ? "lscv" : "rlcv";
}

CvEvaluator::CvEvaluator(const ExpansionTable& table,
                         std::span<const double> sample,
                         FitPoint fit_point,
                         CvScale scale_mode)
  : table_(table)
  , scale_mode_(scale_mode)
  , n_(sample.size())
  , stride_(static_cast<std::size_t>(table.max_degree()) + 1)
{
  if (n_ < 2)
    throw Error(ErrorCode::invalid_argument, "cross-validation needs n >= 2");
  const double h = table.h();
  const double prefactor = 1.0 / (static_cast<double>(table.sample_count()) * h);
  full_terms_.assign(n_ * stride_, 0.0);
  plus_terms_.assign(n_ * stride_, 0.0);

  std::vector<double> p(stride_);
  std::unique_ptr<SystemCache> cache;
  if (fit_point == FitPoint::exact)
    cache = std::make_unique<SystemCache>(table.config().kernel, table.max_degree(), table.config().boundary_mode);

  for (std::size_t i = 0; i < n_; ++i) {
    const double xi = sample[i];
    double* full = &full_terms_[i * stride_];
    double* plus = &plus_terms_[i * stride_];
    const PolySystem* sys = nullptr;
    std::shared_ptr<const PolySystem> own;
    double y;
    std::vector<double> c;
    if (fit_point == FitPoint::nearest_grid) {
      std::size_t g = table.nearest(xi);
      sys = &table.system(g);
      y = (xi - table.grid()[g]) / h;
      for (std::size_t k = 0; k < stride_; ++k)
        c.push_back(table.coefficient(g, static_cast<int>(k)));
    } else {
      const auto& cfg = table.config();
      own = cache->get((cfg.support.lo - xi) / h, (cfg.support.hi - xi) / h);
      sys = own.get();
      y = 0.0;
      c = coefficients(sample, xi, cfg, *sys);
      // coefficients() scales by the actual sample size
      double fix = static_cast<double>(n_) / static_cast<double>(table.sample_count());
      for (double& v : c)
        v *= fix;
    }
    if (y < sys->lower() || y > sys->upper())
      continue;
    sys->evaluate(y, p);
    double w = sys->weight(y) * prefactor;
    for (std::size_t k = 0; k < stride_; ++k) {
      full[k] = c[k] * p[k];
      plus[k] = p[k] * p[k] * w;
    }
  }
}

double CvEvaluator::full(std::size_t i, double M) const
{
  return tapered_sum(std::span<const double>(&full_terms_[i * stride_], stride_), Taper::from_degree(M));
}

double CvEvaluator::plus(std::size_t i, double M) const
{
  return tapered_sum(std::span<const double>(&plus_terms_[i * stride_], stride_), Taper::from_degree(M));
}

double CvEvaluator::loo(std::size_t i, double M) const
{
  double n = static_cast<double>(n_);
  return n / (n - 1.0) * (full(i, M) - plus(i, M));
}

double CvEvaluator::scale(double M) const
{
  if (scale_mode_ == CvScale::raw)
    return 1.0;
  auto raw = table_.raw(M);
  for (double& v : raw)
    v = std::max(0.0, v);
  return trapezoid(table_.grid(), raw);
}

double CvEvaluator::lscv(double M) const
{
  auto f = table_.raw(M);
  double z = 1.0;
  if (scale_mode_ == CvScale::renormalized) {
    for (double& v : f)
      v = std::max(0.0, v);
    z = trapezoid(table_.grid(), f);
    if (!(z > 0.0))
      return std::numeric_limits<double>::quiet_NaN();
  }
  for (double& v : f)
    v = (v / z) * (v / z);
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    s += loo(i, M);
  return trapezoid(table_.grid(), f) - 2.0 / static_cast<double>(n_) * s / z;
}

double CvEvaluator::rlcv(double M, double alpha) const
{
  const double z = scale(M);
  if (!(z > 0.0))
    return -std::numeric_limits<double>::infinity();
  const double damp = std::pow(static_cast<double>(n_), -alpha);
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double v = std::max(loo(i, M), plus(i, M) * damp);
    if (!(v > 0.0))
      return -std::numeric_limits<double>::infinity();
    s += std::log(v);
  }
  return s - static_cast<double>(n_) * std::log(z);
}

double CvEvaluator::score(double M, const CvCriterion& c) const
{
  return c.kind == CvCriterion::Kind::lscv ? lscv(M) : rlcv(M, c.alpha);
}

std::size_t best_cell(std::span<const double> h_grid,
                      std::span<const double> M_grid,
                      std::span<const double> scores,
                      const CvCriterion& criterion)
{
  std::size_t best = scores.size();
  for (std::size_t ih = 0; ih < h_grid.size(); ++ih) {
    for (std::size_t im = 0; im < M_grid.size(); ++im) {
      std::size_t idx = ih * M_grid.size() + im;
      double s = scores[idx];
      if (!std::isfinite(s))
        continue;
      if (best == scores.size()) {
        best = idx;
        continue;
      }
      double bs = scores[best];
      double bh = h_grid[best / M_grid.size()];
      double bm = M_grid[best % M_grid.size()];
      if (criterion.better(s, bs) ||
          (s == bs && (h_grid[ih] > bh || (h_grid[ih] == bh && M_grid[im] < bm))))
        best = idx;
    }
  }
  return best;
}

CvResult select_by_cv(std::span<const double> sample,
                      const LorpeConfig& cfg,
                      std::span<const double> h_grid,
                      std::span<const double> M_grid,
                      const CvCriterion& criterion,
                      const CvOptions& opts)
{
  if (h_grid.empty() || M_grid.empty())
    throw Error(ErrorCode::invalid_argument, "empty tuning grid");
  if (sample.size() < 2)
    throw Error(ErrorCode::invalid_argument, "cross-validation needs n >= 2");
  CvResult res;
  res.h_grid.assign(h_grid.begin(), h_grid.end());
  res.M_grid.assign(M_grid.begin(), M_grid.end());
  res.criterion = criterion;
  res.scores.assign(h_grid.size() * M_grid.size(), std::numeric_limits<double>::quiet_NaN());

  double m_top = *std::max_element(M_grid.begin(), M_grid.end());
  for (std::size_t ih = 0; ih < h_grid.size(); ++ih) {
    LorpeConfig c = cfg;
    c.h = h_grid[ih];
    c.M = m_top;
    ExpansionTable::Options to;
    to.max_degree = degrees_needed(m_top);
    to.exec = opts.exec;
    try {
      ExpansionTable table(sample, c, default_grid(sample, c.support, c.h, c.kernel, opts.grid_size), to);
      CvEvaluator ev(table, sample, opts.fit_point, opts.scale);
      for (std::size_t im = 0; im < M_grid.size(); ++im)
        res.scores[ih * M_grid.size() + im] = ev.score(M_grid[im], criterion);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::invalid_argument)
        throw;
      // cells whose systems cannot be built stay rejected (NaN)
    }
  }

  std::size_t best = best_cell(res.h_grid, res.M_grid, res.scores, criterion);
  if (best == res.scores.size())
    throw Error(ErrorCode::all_rejected, "every (h, M) cell was rejected");
  res.best_h = res.h_grid[best / M_grid.size()];
  res.best_M = res.M_grid[best % M_grid.size()];
  res.best_score = res.scores[best];
  return res;
}

std::vector<double> default_h_grid(double h_center)
{
  if (!(h_center > 0.0))
    throw Error(ErrorCode::invalid_argument, "bandwidth grid center must be positive");
  std::vector<double> g(25);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = h_center * std::pow(8.0, -1.0 + 2.0 * static_cast<double>(i) / 24.0);
  return g;
}

std::vector<double> default_M_grid()
{
  std::vector<double> g;
  for (int i = 0; i <= 24; ++i)
    g.push_back(0.5 * i);
  return g;
}

} // namespace lorpe
