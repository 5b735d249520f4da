#include "lorpe/orthopoly.hpp"
#include "lorpe/error.hpp"
#include "lorpe/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

namespace lorpe {

namespace {

constexpr double min_interval_length = 1e-12;
constexpr double max_residual = 1e-6;
constexpr std::size_t min_nodes = 16;
constexpr std::size_t max_nodes = 4096;

struct Clipped
{
  double lo;
  double hi;
};

Clipped clip_interval(const KernelSpec& kernel, double a_tilde, double b_tilde)
{
  if (!(a_tilde < b_tilde))
    throw Error(ErrorCode::degenerate_interval, "need a_tilde < b_tilde");
  double lim = kernel.effective_half_width();
  Clipped c{ std::max(a_tilde, -lim), std::min(b_tilde, lim) };
  if (!(c.hi - c.lo >= min_interval_length))
    throw Error(ErrorCode::degenerate_interval,
                "effective interval [" + std::to_string(c.lo) + ", " + std::to_string(c.hi) +
                  "] is too short");
  return c;
}

// Points where the weight is not smooth; quadrature panels are split there.
std::vector<double> panel_breaks(const PolySystem& sys, bool reflect_lo, bool reflect_hi)
{
  std::vector<double> cuts{ sys.lower(), sys.upper() };
  if (sys.kernel().is_compact()) {
    double lim = sys.kernel().effective_half_width();
    if (reflect_lo) {
      cuts.push_back(2.0 * sys.lower() + lim);
      cuts.push_back(2.0 * sys.lower() - lim);
    }
    if (reflect_hi) {
      cuts.push_back(2.0 * sys.upper() - lim);
      cuts.push_back(2.0 * sys.upper() + lim);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  for (double c : cuts) {
    if (c < sys.lower() || c > sys.upper())
      continue;
    if (out.empty() || c - out.back() > 1e-14 * (1.0 + std::fabs(c)))
      out.push_back(c);
  }
  return out;
}

} // namespace

double PolySystem::weight(double y) const
{
  double w = kernel_(y);
  if (reflect_lower_)
    w += kernel_(2.0 * lower_ - y);
  if (reflect_upper_)
    w += kernel_(2.0 * upper_ - y);
  return w;
}

double Recurrence::operator()(int k, double y) const
{
  if (k < 0 || k > max_degree())
    throw Error(ErrorCode::degree_out_of_range,
                "degree " + std::to_string(k) + " outside [0, " + std::to_string(max_degree()) + "]");
  double prev = 0.0;
  double cur = 1.0 / b_[0];
  for (int j = 0; j < k; ++j) {
    double next = ((y - alpha_[j]) * cur - b_[j] * prev) / b_[j + 1];
    prev = cur;
    cur = next;
  }
  return cur;
}

void Recurrence::evaluate(double y, std::span<double> out) const
{
  if (out.empty())
    return;
  int m = static_cast<int>(out.size()) - 1;
  if (m > max_degree())
    throw Error(ErrorCode::degree_out_of_range, "requested more degrees than built");
  out[0] = 1.0 / b_[0];
  if (m == 0)
    return;
  out[1] = (y - alpha_[0]) * out[0] / b_[1];
  for (int j = 1; j < m; ++j)
    out[j + 1] = ((y - alpha_[j]) * out[j] - b_[j] * out[j - 1]) / b_[j + 1];
}

std::vector<double> Recurrence::monomial_coefficients(int k) const
{
  if (k < 0 || k > max_degree())
    throw Error(ErrorCode::degree_out_of_range, "degree out of range");
  std::vector<double> prev;
  std::vector<double> cur{ 1.0 / b_[0] };
  for (int j = 0; j < k; ++j) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= alpha_[j] * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i)
      next[i] -= b_[j] * prev[i];
    for (double& c : next)
      c /= b_[j + 1];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Recurrence stieltjes(std::span<const double> y, std::span<const double> w, int max_degree)
{
  if (max_degree < 0 || y.size() != w.size())
    throw Error(ErrorCode::invalid_argument, "stieltjes needs matching nodes/weights and degree >= 0");
  const std::size_t n = y.size();
  const std::size_t m = static_cast<std::size_t>(max_degree);
  if (n <= m)
    throw Error(ErrorCode::ill_conditioned, "measure has fewer support points than degrees");

  Recurrence rec;
  // polys holds P_k at the nodes, row k.
  std::vector<double> polys((m + 1) * n);
  rec.alpha_.assign(m, 0.0);
  rec.b_.assign(m + 1, 0.0);

  double mass = 0.0;
  for (std::size_t q = 0; q < n; ++q)
    mass += w[q];
  if (!(mass > 0.0))
    throw Error(ErrorCode::ill_conditioned, "measure has no mass");
  rec.b_[0] = std::sqrt(mass);
  for (std::size_t q = 0; q < n; ++q)
    polys[q] = 1.0 / rec.b_[0];

  std::vector<double> next(n);
  for (std::size_t k = 0; k < m; ++k) {
    const double* pk = &polys[k * n];
    const double* pkm1 = k > 0 ? &polys[(k - 1) * n] : nullptr;
    double a = 0.0;
    for (std::size_t q = 0; q < n; ++q)
      a += w[q] * y[q] * pk[q] * pk[q];
    for (std::size_t q = 0; q < n; ++q)
      next[q] = (y[q] - a) * pk[q] - (pkm1 ? rec.b_[k] * pkm1[q] : 0.0);
    // one re-orthogonalization sweep against P_k, folded into alpha_k
    double d = 0.0;
    for (std::size_t q = 0; q < n; ++q)
      d += w[q] * next[q] * pk[q];
    a += d;
    double norm2 = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      next[q] -= d * pk[q];
      norm2 += w[q] * next[q] * next[q];
    }
    double bk = std::sqrt(norm2);
    if (!(bk > 0.0))
      throw Error(ErrorCode::ill_conditioned, "Stieltjes recurrence broke down");
    rec.alpha_[k] = a;
    rec.b_[k + 1] = bk;
    double* pn = &polys[(k + 1) * n];
    for (std::size_t q = 0; q < n; ++q)
      pn[q] = next[q] / bk;
  }

  double residual = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double* pj = &polys[j * n];
    for (std::size_t k = j; k <= m; ++k) {
      const double* pk = &polys[k * n];
      double s = 0.0;
      for (std::size_t q = 0; q < n; ++q)
        s += w[q] * pj[q] * pk[q];
      residual = std::max(residual, std::fabs(s - (j == k ? 1.0 : 0.0)));
    }
  }
  rec.residual_ = residual;
  if (!(residual <= max_residual))
    throw Error(ErrorCode::ill_conditioned,
                "orthonormality residual " + std::to_string(residual) + " exceeds 1e-6");
  return rec;
}

PolySystem build_system_with_nodes(const KernelSpec& kernel,
                                   double a_tilde,
                                   double b_tilde,
                                   int max_degree,
                                   BoundaryMode mode,
                                   std::size_t nodes_per_panel)
{
  if (max_degree < 0)
    throw Error(ErrorCode::invalid_argument, "max_degree must be >= 0");
  Clipped c = clip_interval(kernel, a_tilde, b_tilde);
  double lim = kernel.effective_half_width();

  PolySystem sys(kernel, mode);
  sys.lower_ = c.lo;
  sys.upper_ = c.hi;
  if (mode == BoundaryMode::kernel_mirror) {
    sys.reflect_lower_ = c.lo > -lim;
    sys.reflect_upper_ = c.hi < lim;
  }

  const auto& rule = gauss_legendre(nodes_per_panel);
  auto cuts = panel_breaks(sys, sys.reflect_lower_, sys.reflect_upper_);
  std::size_t panels = cuts.size() - 1;
  sys.nodes_.reserve(panels * nodes_per_panel);
  sys.weights_.reserve(panels * nodes_per_panel);
  for (std::size_t p = 0; p < panels; ++p) {
    double mid = 0.5 * (cuts[p] + cuts[p + 1]);
    double half = 0.5 * (cuts[p + 1] - cuts[p]);
    for (std::size_t q = 0; q < nodes_per_panel; ++q) {
      double y = mid + half * rule.nodes[q];
      double w = half * rule.weights[q] * sys.weight(y);
      if (w > 0.0) {
        sys.nodes_.push_back(y);
        sys.weights_.push_back(w);
      }
    }
  }

  if (sys.nodes_.size() <= static_cast<std::size_t>(max_degree))
    throw Error(ErrorCode::ill_conditioned, "quadrature has fewer nodes than degrees");
  static_cast<Recurrence&>(sys) = stieltjes(sys.nodes_, sys.weights_, max_degree);
  return sys;
}

std::size_t calibrated_node_count(const KernelSpec& kernel, int max_degree, BoundaryMode mode)
{
  using Key = std::tuple<int, double, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::size_t> cache;
  Key key{ static_cast<int>(kernel.family()), kernel.alpha(), max_degree, static_cast<int>(mode) };
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end())
      return it->second;
  }

  double lim = kernel.effective_half_width();
  int degree = std::max(max_degree, 1);
  auto close = [](std::span<const double> u, std::span<const double> v, double scale) {
    for (std::size_t i = 0; i < u.size(); ++i)
      if (std::fabs(u[i] - v[i]) > 1e-12 * (scale + std::fabs(v[i])))
        return false;
    return true;
  };

  std::size_t chosen = max_nodes;
  std::size_t n = std::max<std::size_t>(min_nodes, std::bit_ceil(static_cast<std::size_t>(degree + 2)));
  auto build = [&](std::size_t nodes) {
    return build_system_with_nodes(kernel, -lim, lim, degree, BoundaryMode::clip_polys, nodes);
  };
  PolySystem coarse = build(n);
  while (n < max_nodes) {
    PolySystem fine = build(2 * n);
    if (close(coarse.recurrence_alpha(), fine.recurrence_alpha(), lim) &&
        close(coarse.recurrence_b(), fine.recurrence_b(), lim)) {
      chosen = n;
      break;
    }
    coarse = std::move(fine);
    n *= 2;
  }

  std::lock_guard lock(mutex);
  cache.emplace(key, chosen);
  return chosen;
}

PolySystem build_system(const KernelSpec& kernel,
                        double a_tilde,
                        double b_tilde,
                        int max_degree,
                        BoundaryMode mode)
{
  return build_system_with_nodes(
    kernel, a_tilde, b_tilde, max_degree, mode, calibrated_node_count(kernel, max_degree, mode));
}

std::vector<double> closed_form_gegenbauer(double alpha, int k)
{
  if (!(alpha >= 0.5) || k < 0)
    throw Error(ErrorCode::invalid_argument, "closed_form_gegenbauer needs alpha >= 1/2, k >= 0");
  const double lam = alpha;
  std::vector<double> coef(static_cast<std::size_t>(k) + 1, 0.0);
  for (int m = 0; 2 * m <= k; ++m) {
    int p = k - 2 * m;
    double log_mag = std::lgamma(k - m + lam) - std::lgamma(lam) - std::lgamma(m + 1.0) -
                     std::lgamma(p + 1.0) + p * std::log(2.0);
    coef[static_cast<std::size_t>(p)] = (m % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
  }
  // squared norm of C_k under (1 - x^2)^(lam - 1/2)
  double log_h = std::log(std::numbers::pi) + (1.0 - 2.0 * lam) * std::log(2.0) +
                 std::lgamma(k + 2.0 * lam) - std::lgamma(k + 1.0) - std::log(k + lam) -
                 2.0 * std::lgamma(lam);
  // normalized kernel is c * (1 - x^2)^(lam - 1/2)
  double log_c = std::lgamma(lam + 1.0) - std::lgamma(lam + 0.5) - 0.5 * std::log(std::numbers::pi);
  double scale = std::exp(-0.5 * (log_h + log_c));
  for (double& c : coef)
    c *= scale;
  return coef;
}

SystemCache::SystemCache(const KernelSpec& kernel, int max_degree, BoundaryMode mode)
  : kernel_(kernel)
  , max_degree_(max_degree)
  , mode_(mode)
{}

std::size_t SystemCache::KeyHash::operator()(const Key& k) const noexcept
{
  auto a = std::bit_cast<std::uint64_t>(k.lo);
  auto b = std::bit_cast<std::uint64_t>(k.hi);
  return std::hash<std::uint64_t>{}(a ^ (b * 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

std::shared_ptr<const PolySystem> SystemCache::get(double a_tilde, double b_tilde)
{
  Clipped c = clip_interval(kernel_, a_tilde, b_tilde);
  Key key{ c.lo, c.hi };
  {
    std::shared_lock lock(mutex_);
    if (auto it = systems_.find(key); it != systems_.end())
      return it->second;
  }
  auto sys = std::make_shared<const PolySystem>(build_system(kernel_, c.lo, c.hi, max_degree_, mode_));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = systems_.try_emplace(key, std::move(sys));
  return it->second;
}

std::size_t SystemCache::size() const
{
  std::shared_lock lock(mutex_);
  return systems_.size();
}

} // namespace lorpe
