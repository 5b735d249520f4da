#include "lorpe/expansion.hpp"
#include "lorpe/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lorpe {

namespace {

struct Workspace
{
  std::vector<double> y;
  std::vector<double> w;
  std::vector<double> prev;
  std::vector<double> cur;
};

// c_k for one fit point from the sorted sample; inner loops run across the
// sample window so the recurrence vectorizes.
void accumulate(const PolySystem& sys,
                std::span<const double> sorted,
                double x_fit,
                double h,
                double scale,
                std::span<double> c,
                Workspace& ws)
{
  std::fill(c.begin(), c.end(), 0.0);
  auto first = std::lower_bound(sorted.begin(), sorted.end(), x_fit + sys.lower() * h);
  auto last = std::upper_bound(first, sorted.end(), x_fit + sys.upper() * h);
  std::size_t count = static_cast<std::size_t>(last - first);
  if (count == 0)
    return;

  ws.y.resize(count);
  ws.w.resize(count);
  ws.prev.resize(count);
  ws.cur.resize(count);
  double* y = ws.y.data();
  double* w = ws.w.data();
  double* prev = ws.prev.data();
  double* cur = ws.cur.data();

  for (std::size_t i = 0; i < count; ++i) {
    y[i] = (first[static_cast<std::ptrdiff_t>(i)] - x_fit) / h;
    w[i] = sys.weight(y[i]) * scale;
  }

  auto alpha = sys.recurrence_alpha();
  auto b = sys.recurrence_b();
  const int m = static_cast<int>(c.size()) - 1;

  double p0 = 1.0 / b[0];
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < count; ++i) {
    prev[i] = 0.0;
    cur[i] = p0;
    s += w[i];
  }
  c[0] = s * p0;

  for (int k = 0; k < m; ++k) {
    const double a = alpha[static_cast<std::size_t>(k)];
    const double bk = b[static_cast<std::size_t>(k)];
    const double inv = 1.0 / b[static_cast<std::size_t>(k) + 1];
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t i = 0; i < count; ++i) {
      double next = ((y[i] - a) * cur[i] - bk * prev[i]) * inv;
      prev[i] = cur[i];
      cur[i] = next;
      acc += w[i] * next;
    }
    c[static_cast<std::size_t>(k) + 1] = acc;
  }
}

} // namespace

ExpansionTable::ExpansionTable(std::span<const double> sample,
                               const LorpeConfig& cfg,
                               std::vector<double> grid,
                               const Options& opts)
  : cfg_(cfg)
  , grid_(std::move(grid))
  , max_degree_(opts.max_degree)
  , h_(cfg.h)
  , norm_count_(opts.norm_count ? opts.norm_count : sample.size())
{
  cfg.validate();
  if (sample.empty())
    throw Error(ErrorCode::invalid_argument, "empty sample");
  if (max_degree_ < 0)
    throw Error(ErrorCode::invalid_argument, "negative max_degree");

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());

  const std::size_t G = grid_.size();
  const std::size_t S = stride();
  coef_.assign(G * S, 0.0);
  p0_.assign(G * S, 0.0);
  systems_.resize(G);

  SystemCache cache(cfg.kernel, max_degree_, cfg.boundary_mode);
  const double inf = std::numeric_limits<double>::infinity();
  const double scale = 1.0 / (static_cast<double>(norm_count_) * h_);
  const bool interior = opts.interior_only;

  auto body = [&](std::size_t g, Workspace& ws) {
    double x = grid_[g];
    double at = interior ? -inf : (cfg_.support.lo - x) / h_;
    double bt = interior ? inf : (cfg_.support.hi - x) / h_;
    auto sys = cache.get(at, bt);
    std::span<double> c(&coef_[g * S], S);
    accumulate(*sys, sorted, x, h_, scale, c, ws);
    sys->evaluate(0.0, std::span<double>(&p0_[g * S], S));
    systems_[g] = std::move(sys);
  };

  if (opts.exec == Execution::serial) {
    Workspace ws;
    for (std::size_t g = 0; g < G; ++g)
      body(g, ws);
  } else {
    // exceptions cannot cross the OpenMP region; rethrow the first one after
    std::exception_ptr failure;
#pragma omp parallel
    {
      Workspace ws;
#pragma omp for schedule(dynamic, 16)
      for (std::size_t g = 0; g < G; ++g) {
        try {
          body(g, ws);
        } catch (...) {
#pragma omp critical(lorpe_table_failure)
          if (!failure)
            failure = std::current_exception();
        }
      }
    }
    if (failure)
      std::rethrow_exception(failure);
  }
}

std::vector<double> ExpansionTable::raw(double M) const
{
  if (degrees_needed(M) > max_degree_)
    throw Error(ErrorCode::degree_out_of_range, "degree exceeds the table's max_degree");
  Taper taper = Taper::from_degree(M);
  const int top = std::min(taper.max_degree(), max_degree_);
  const std::size_t S = stride();
  std::vector<double> out(grid_.size());
  for (std::size_t g = 0; g < grid_.size(); ++g) {
    const double* c = &coef_[g * S];
    const double* p = &p0_[g * S];
    double s = 0.0;
    for (int k = 0; k <= top; ++k)
      s += taper[k] * c[k] * p[k];
    out[g] = s;
  }
  return out;
}

double ExpansionTable::expand(std::size_t g, double x, double M) const
{
  if (degrees_needed(M) > max_degree_)
    throw Error(ErrorCode::degree_out_of_range, "degree exceeds the table's max_degree");
  Taper taper = Taper::from_degree(M);
  const int top = std::min(taper.max_degree(), max_degree_);
  std::vector<double> p(static_cast<std::size_t>(top) + 1);
  systems_[g]->evaluate((x - grid_[g]) / h_, p);
  const double* c = &coef_[g * stride()];
  double s = 0.0;
  for (int k = 0; k <= top; ++k)
    s += taper[k] * c[k] * p[static_cast<std::size_t>(k)];
  return s;
}

std::size_t ExpansionTable::nearest(double x) const
{
  auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
  if (it == grid_.begin())
    return 0;
  if (it == grid_.end())
    return grid_.size() - 1;
  auto i = static_cast<std::size_t>(it - grid_.begin());
  return (x - grid_[i - 1] <= grid_[i] - x) ? i - 1 : i;
}

} // namespace lorpe
