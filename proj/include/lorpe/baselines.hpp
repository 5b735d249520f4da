#pragma once

#include "lorpe/lorpe.hpp"
#include "lorpe/orthopoly.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lorpe {

//! Plain KDE values (1/(n h)) sum_i K((x - x_i)/h) at each x; with a mirror
//! point c every x_i also contributes its reflection 2c - x_i.
std::vector<double> kde_raw(std::span<const double> sample,
                            double h,
                            const KernelSpec& kernel,
                            std::optional<double> mirror,
                            std::span<const double> grid);

//! KDE clipped and renormalized on the grid. With a mirror point the grid
//! must lie on one side of it.
DensityEstimate kde_estimate(std::span<const double> sample,
                             double h,
                             const KernelSpec& kernel,
                             std::optional<double> mirror,
                             std::span<const double> grid);

//! Same on default_grid(sample, support, h, kernel); a mirror point replaces
//! the corresponding infinite support end.
DensityEstimate kde_estimate(std::span<const double> sample,
                             double h,
                             const KernelSpec& kernel,
                             const Support& support = {},
                             std::optional<double> mirror = std::nullopt);

//! KDE with the interior effective kernel of degree M (order M + 1 for odd
//! M, M + 2 for even M) at every grid point, i.e. no boundary adaptation.
DensityEstimate kde_effective_estimate(std::span<const double> sample,
                                       double h,
                                       const KernelSpec& kernel,
                                       double M,
                                       std::optional<double> mirror,
                                       std::span<const double> grid,
                                       Execution exec = Execution::parallel);

//! Order-r KDE (r even >= 2): kde_effective_estimate with M = r - 2.
DensityEstimate kde_highorder_estimate(std::span<const double> sample,
                                       double h,
                                       const KernelSpec& kernel,
                                       int r,
                                       std::optional<double> mirror,
                                       std::span<const double> grid);

//! Grid for KDE-family estimates: the support side of the mirror point when
//! one is given, otherwise default_grid.
std::vector<double> kde_grid(std::span<const double> sample,
                             double h,
                             const KernelSpec& kernel,
                             const Support& support,
                             std::optional<double> mirror,
                             std::size_t n = 1024);

struct OsdeConfig
{
  int J = 0;
  std::size_t grid_size = 2048;
};

//! Linear map sending the sample minimum to 1/(2n) and the maximum to
//! 1 - 1/(2n); to_x(0) and to_x(1) bound the estimated support.
struct OsdeMap
{
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 1;

  static OsdeMap from_sample(std::span<const double> sample);
  double to_u(double x) const;
  double to_x(double u) const;
  double slope() const; //!< du/dx
};

//! Cell centers (g + 1/2)/G of [0, 1].
std::vector<double> osde_unit_grid(std::size_t grid_size);

//! Discrete orthonormal polynomials under the uniform weight 1/G on the
//! osde_unit_grid points (the discrete analog of Legendre polynomials).
Recurrence discrete_legendre(std::size_t grid_size, int max_degree);

//! theta_j = (1/n) sum_i phi_j(u_i), j = 0..max_degree, on the mapped sample.
std::vector<double> osde_coefficients(std::span<const double> sample, const Recurrence& basis);

//! Orthogonal series estimate with J + 1 terms, mapped back to data units,
//! clipped and renormalized. Errors: invalid_argument for n < 2 or
//! J >= grid_size, degenerate_sample if all points coincide.
DensityEstimate osde_estimate(std::span<const double> sample, const OsdeConfig& cfg);

//! Term count by a risk-threshold rule: term j is significant when
//! n theta_j^2 > 2 var_j, with var_j the sample variance of phi_j(u_i).
//! J is the last significant term in a scan over 1..J_max that stops after
//! two consecutive non-significant terms.
int select_osde_terms(std::span<const double> sample, int J_max = 48, std::size_t grid_size = 2048);

//! Continuous-Legendre series estimate on a known interval [a, b]:
//! sum_{j <= J} theta_j phi_j(x) with phi_j orthonormal on [a, b]. Unclipped.
std::vector<double> legendre_osde_raw(std::span<const double> sample,
                                      double a,
                                      double b,
                                      int J,
                                      std::span<const double> x);

} // namespace lorpe
