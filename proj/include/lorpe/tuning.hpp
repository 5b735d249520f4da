#pragma once

#include "lorpe/expansion.hpp"
#include "lorpe/lorpe.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace lorpe {

//! How the plug-in kernel order r is turned into a degree M.
enum class DegreeRule
{
  case_table,  //!< M = r + 1 for even r, r + 2 for odd r
  kernel_order //!< M = r - 2, the smallest degree whose interior effective kernel has order r
};

//! Moments of the interior effective kernel of order r (step taper, M = r - 1).
struct KernelMoments
{
  int order = 2;
  double mu = 0.0; //!< integral of u^r K_eff(u)
  double R = 0.0;  //!< integral of K_eff(u)^2
};

KernelMoments effective_kernel_moments(const KernelSpec& kernel, int r);

//! Normal-reference AMISE at the optimal bandwidth for an order-r kernel.
double normal_reference_amise(int r, double sigma, std::size_t n, const KernelMoments& m);

//! Normal-reference AMISE-optimal bandwidth for an order-r kernel.
double normal_reference_bandwidth(int r, double sigma, std::size_t n, const KernelMoments& m);

struct PluginResult
{
  int r_hat = 2;
  double h_hat = 0.0;
  int M_hat = 0;
  double sigma_hat = 0.0;
  std::map<int, double> amise_curve;
};

//! Sample standard deviation with the n - 1 denominator.
double sample_sd(std::span<const double> sample);

//! Plug-in (h, M): minimizes the normal-reference AMISE over r_range.
//! Errors: degenerate_sample when the sample standard deviation is zero
//! (including n < 2), invalid_argument for n < 3 or odd/small orders.
PluginResult plug_in(std::span<const double> sample,
                     const KernelSpec& kernel,
                     std::span<const int> r_range,
                     DegreeRule rule = DegreeRule::case_table);

PluginResult plug_in(std::span<const double> sample,
                     const KernelSpec& kernel,
                     DegreeRule rule = DegreeRule::case_table);

//! Where f^(-i)(x) and f^(+i)(x) take their local expansion.
enum class FitPoint
{
  nearest_grid, //!< grid point nearest x (default 1024-point grid)
  exact         //!< x itself
};

//! Which estimate the CV criteria score.
enum class CvScale
{
  //! estimates divided by Z, the integral of max(0, raw) over the grid, so
  //! every cell is scored on a unit-mass estimate like the one returned
  renormalized,
  raw //!< the unnormalized expansion values
};

struct CvOptions
{
  FitPoint fit_point = FitPoint::nearest_grid;
  CvScale scale = CvScale::renormalized;
  std::size_t grid_size = 1024;
  Execution exec = Execution::parallel;
};

//! Fit point used for x under the given policy.
double fit_point_for(double x,
                     std::span<const double> sample,
                     const LorpeConfig& cfg,
                     const CvOptions& opts = {});

//! Full-sample local expansion at x about fit_point_for(x).
double full_value(std::span<const double> sample, double x, const LorpeConfig& cfg, const CvOptions& opts = {});

//! Contribution of point i: (1/(n h)) sum_k t(k) P_k(y_i) w(y_i) P_k(z).
double plus_i_value(std::span<const double> sample,
                    std::size_t i,
                    double x,
                    const LorpeConfig& cfg,
                    const CvOptions& opts = {});

//! Leave-one-out estimate at x (prefactor 1/((n - 1) h)), obtained by
//! subtracting point i's contribution from the full-sample coefficients.
double loo_value(std::span<const double> sample,
                 std::size_t i,
                 double x,
                 const LorpeConfig& cfg,
                 const CvOptions& opts = {});

struct CvCriterion
{
  enum class Kind
  {
    lscv,
    rlcv
  };
  Kind kind = Kind::rlcv;
  double alpha = 0.5;

  static CvCriterion lscv() { return { Kind::lscv, 0.5 }; }
  static CvCriterion rlcv(double alpha = 0.5) { return { Kind::rlcv, alpha }; }
  //! Higher-is-better for RLCV, lower-is-better for LSCV.
  bool better(double a, double b) const { return kind == Kind::lscv ? a < b : a > b; }
  std::string name() const;
};

//! Leave-one-out quantities for all sample points from one expansion table;
//! any M up to the table degree is then O(n M).
class CvEvaluator
{
public:
  CvEvaluator(const ExpansionTable& table,
              std::span<const double> sample,
              FitPoint fit_point,
              CvScale scale = CvScale::renormalized);

  std::size_t size() const { return n_; }
  //! Unscaled expansion values at x_i.
  double full(std::size_t i, double M) const;
  double plus(std::size_t i, double M) const;
  double loo(std::size_t i, double M) const;

  //! Divisor applied by the criteria: Z(M) when renormalized, else 1.
  double scale(double M) const;

  //! integral of f^2 minus (2/n) sum_i f^(-i)(x_i); f is max(0, raw)/Z
  //! when renormalized, raw otherwise.
  double lscv(double M) const;
  //! sum_i log max(f^(-i)(x_i), f^(+i)(x_i) / n^alpha), both divided by
  //! scale(M); -inf if both are <= 0.
  double rlcv(double M, double alpha) const;
  double score(double M, const CvCriterion& c) const;

private:
  const ExpansionTable& table_;
  CvScale scale_mode_;
  std::size_t n_;
  std::size_t stride_;
  std::vector<double> full_terms_; // c_k(g_i) P_k(z_i)
  std::vector<double> plus_terms_; // P_k(z_i)^2 w(z_i) / (n h)
};

struct CvResult
{
  std::vector<double> h_grid;
  std::vector<double> M_grid;
  std::vector<double> scores; //!< h-major: scores[ih * M_grid.size() + im]
  double best_h = 0.0;
  double best_M = 0.0;
  double best_score = 0.0;
  CvCriterion criterion;

  double score(std::size_t ih, std::size_t im) const { return scores[ih * M_grid.size() + im]; }
};

//! Index of the best cell; ties go to larger h, then smaller M. Returns
//! scores.size() when every cell is NaN or -inf (RLCV) / +inf (LSCV).
std::size_t best_cell(std::span<const double> h_grid,
                      std::span<const double> M_grid,
                      std::span<const double> scores,
                      const CvCriterion& criterion);

//! Criterion on the full (h, M) grid. cfg supplies kernel, support and
//! boundary mode (its h and M are ignored).
//! Errors: invalid_argument for empty grids or n < 2, all_rejected if no
//! cell has a finite score.
CvResult select_by_cv(std::span<const double> sample,
                      const LorpeConfig& cfg,
                      std::span<const double> h_grid,
                      std::span<const double> M_grid,
                      const CvCriterion& criterion,
                      const CvOptions& opts = {});

//! 25 log-spaced bandwidths on [h / 8, 8 h].
std::vector<double> default_h_grid(double h_center);

//! 0, 0.5, ..., 12.
std::vector<double> default_M_grid();

} // namespace lorpe
