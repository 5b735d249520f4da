#pragma once

#include "lorpe/lorpe.hpp"

#include <memory>
#include <span>
#include <vector>

namespace lorpe {

//! Expansion coefficients c_k(g) and P_k(0) for every grid point g, for all
//! degrees up to max_degree at once. Any real M <= max_degree is then a
//! cheap weighted sum, which is what the CV and oracle searches rely on.
class ExpansionTable
{
public:
  struct Options
  {
    int max_degree = 0;
    Execution exec = Execution::parallel;
    //! Use the unclipped (interior) system at every grid point; this turns
    //! the table into a KDE with the interior effective kernels.
    bool interior_only = false;
    //! Sample size used in the 1/(n h) prefactor; 0 means sample.size().
    std::size_t norm_count = 0;
  };

  ExpansionTable(std::span<const double> sample,
                 const LorpeConfig& cfg,
                 std::vector<double> grid,
                 const Options& opts);

  std::size_t grid_size() const { return grid_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  int max_degree() const { return max_degree_; }
  double h() const { return h_; }
  std::size_t sample_count() const { return norm_count_; }
  const LorpeConfig& config() const { return cfg_; }

  double coefficient(std::size_t g, int k) const { return coef_[g * stride() + k]; }
  double poly_at_zero(std::size_t g, int k) const { return p0_[g * stride() + k]; }
  const PolySystem& system(std::size_t g) const { return *systems_[g]; }

  //! Raw estimate at every grid point for degree M (M <= max_degree).
  std::vector<double> raw(double M) const;

  //! Local expansion about grid point g evaluated at x.
  double expand(std::size_t g, double x, double M) const;

  //! Index of the grid point nearest x.
  std::size_t nearest(double x) const;

private:
  std::size_t stride() const { return static_cast<std::size_t>(max_degree_) + 1; }

  LorpeConfig cfg_;
  std::vector<double> grid_;
  int max_degree_;
  double h_;
  std::size_t norm_count_;
  std::vector<double> coef_;
  std::vector<double> p0_;
  std::vector<std::shared_ptr<const PolySystem>> systems_;
};

} // namespace lorpe
