#pragma once

#include "lorpe/kernels.hpp"
#include "lorpe/orthopoly.hpp"
#include "lorpe/taper.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace lorpe {

//! Serial loops are the reference path; parallel runs the same per-point
//! work under OpenMP and produces bit-identical results.
enum class Execution
{
  serial,
  parallel
};

//! Density support [lo, hi]; either end may be infinite.
struct Support
{
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool finite_lo() const { return lo > -std::numeric_limits<double>::infinity(); }
  bool finite_hi() const { return hi < std::numeric_limits<double>::infinity(); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct LorpeConfig
{
  double h = 1.0;  //!< bandwidth, data units
  double M = 0.0;  //!< real-valued degree (effective degrees of freedom)
  KernelSpec kernel = KernelSpec::gaussian();
  Support support{};
  BoundaryMode boundary_mode = BoundaryMode::clip_polys;

  //! Throws Error(invalid_argument) unless h > 0, M >= 0 and lo < hi.
  void validate() const;
};

//! Grid estimate. raw may be negative; value = max(0, raw) / norm_constant
//! where norm_constant is the trapezoid integral of max(0, raw).
struct DensityEstimate
{
  std::vector<double> grid;
  std::vector<double> raw;
  std::vector<double> value;
  double norm_constant = 0.0;

  //! Linear interpolation of value; zero outside the grid.
  double operator()(double x) const;
};

//! Clips negatives and renormalizes once over the whole grid.
//! Throws Error(all_zero_density) when nothing positive remains.
DensityEstimate finalize_density(std::vector<double> grid, std::vector<double> raw);

std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

//! Default estimation grid: n points over the support, with infinite ends
//! replaced by the sample extremes -/+ (kernel half-width) * h.
std::vector<double> default_grid(std::span<const double> sample,
                                 const Support& support,
                                 double h,
                                 const KernelSpec& kernel,
                                 std::size_t n = 1024);

//! Polynomial system for fit point x_fit: built on [(a - x_fit)/h, (b - x_fit)/h].
PolySystem system_at(double x_fit, const LorpeConfig& cfg, int max_degree);

//! c_k = (1/(n h)) sum_i P_k(y_i) w(y_i), y_i = (x_i - x_fit)/h, for k = 0..sys.max_degree().
std::vector<double> coefficients(std::span<const double> sample,
                                 double x_fit,
                                 const LorpeConfig& cfg,
                                 const PolySystem& sys);

//! Tapered local expansion about x_fit, evaluated at x.
double local_expansion(std::span<const double> sample, double x_fit, double x, const LorpeConfig& cfg);

//! sum_k t(k) c_k(x_fit) P_k(0): the raw (possibly negative) estimate at x_fit.
double evaluate_raw(std::span<const double> sample, double x_fit, const LorpeConfig& cfg);

//! Raw estimates at every grid point followed by one clip-and-renormalize.
DensityEstimate estimate_on_grid(std::span<const double> sample,
                                 const LorpeConfig& cfg,
                                 std::span<const double> grid,
                                 Execution exec = Execution::parallel);

//! Convenience overload on default_grid(sample, cfg.support, cfg.h, cfg.kernel).
DensityEstimate estimate_on_grid(std::span<const double> sample, const LorpeConfig& cfg);

//! K_eff(u) = sum_k t(k) P_k(0) P_k(-u) w(-u) for the system at x_fit; zero
//! where -u falls outside the system's effective interval.
std::vector<double> effective_kernel(const LorpeConfig& cfg, double x_fit, std::span<const double> u);

} // namespace lorpe
