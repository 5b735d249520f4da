#pragma once

#include "lorpe/kernels.hpp"

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace lorpe {

//! How the weight is handled when the fit point is near a support end.
enum class BoundaryMode
{
  clip_polys,   //!< orthogonalize on the clipped interval with K itself
  kernel_mirror //!< add the kernel reflected about each active boundary
};

//! Orthonormal polynomial family stored as three-term recurrence coefficients
//!   y P_k = b_{k+1} P_{k+1} + alpha_k P_k + b_k P_{k-1},  P_0 = 1 / b_0,
//! so the polynomials extend outside the construction measure's support.
class Recurrence
{
public:
  int max_degree() const { return static_cast<int>(b_.size()) - 1; }

  std::span<const double> recurrence_alpha() const { return alpha_; }
  std::span<const double> recurrence_b() const { return b_; }

  //! max_{j,k} |sum_q w_q P_j P_k - delta_jk| over the construction measure.
  double norm_residual() const { return residual_; }

  //! P_k(y); throws Error(degree_out_of_range) unless 0 <= k <= max_degree.
  double operator()(int k, double y) const;

  //! Writes P_0(y)..P_m(y) into out, m = out.size() - 1 <= max_degree.
  void evaluate(double y, std::span<double> out) const;

  //! Monomial coefficients (constant term first) of P_k.
  std::vector<double> monomial_coefficients(int k) const;

protected:
  friend Recurrence stieltjes(std::span<const double>, std::span<const double>, int);

  std::vector<double> alpha_;
  std::vector<double> b_;
  double residual_ = 0.0;
};

//! Discretized Stieltjes procedure (one re-orthogonalization sweep per step)
//! for the discrete measure sum_q weights[q] delta(nodes[q]).
//! Errors: ill_conditioned if the recurrence breaks down or the residual
//! exceeds 1e-6.
Recurrence stieltjes(std::span<const double> nodes, std::span<const double> weights, int max_degree);

//! Orthonormal polynomials P_0..P_M on [lower, upper] under the kernel weight:
//! the integral of P_j P_k w over the interval is delta_jk.
class PolySystem : public Recurrence
{
public:
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  const KernelSpec& kernel() const { return kernel_; }
  BoundaryMode mode() const { return mode_; }

  //! Orthogonalization weight (K, or K plus its reflections).
  double weight(double y) const;

  //! Quadrature on [lower, upper]; the weights already include weight(y).
  std::span<const double> quadrature_nodes() const { return nodes_; }
  std::span<const double> quadrature_weights() const { return weights_; }

private:
  friend PolySystem build_system(const KernelSpec&, double, double, int, BoundaryMode);
  friend PolySystem build_system_with_nodes(const KernelSpec&, double, double, int,
                                            BoundaryMode, std::size_t);

  PolySystem(const KernelSpec& kernel, BoundaryMode mode)
    : kernel_(kernel)
    , mode_(mode)
  {}

  KernelSpec kernel_;
  BoundaryMode mode_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  bool reflect_lower_ = false;
  bool reflect_upper_ = false;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

//! Builds the system on [a_tilde, b_tilde] intersected with the kernel support
//! by the discretized Stieltjes procedure. Infinite ends are allowed.
//! Errors: degenerate_interval if the effective interval is shorter than
//! 1e-12, ill_conditioned if the orthonormality residual exceeds 1e-6.
PolySystem build_system(const KernelSpec& kernel,
                        double a_tilde,
                        double b_tilde,
                        int max_degree,
                        BoundaryMode mode = BoundaryMode::clip_polys);

//! Same, with an explicit Gauss-Legendre size per quadrature panel.
PolySystem build_system_with_nodes(const KernelSpec& kernel,
                                   double a_tilde,
                                   double b_tilde,
                                   int max_degree,
                                   BoundaryMode mode,
                                   std::size_t nodes_per_panel);

//! Panel size for (kernel, degree, mode): the smallest power of two for which
//! doubling changes the recurrence coefficients on the full kernel support by
//! less than 1e-12. Computed once per key.
std::size_t calibrated_node_count(const KernelSpec& kernel, int max_degree, BoundaryMode mode);

//! Monomial coefficients (constant term first) of the degree-k Gegenbauer
//! polynomial with parameter alpha, scaled to be orthonormal under the
//! normalized symmetric-Beta kernel with the same alpha.
std::vector<double> closed_form_gegenbauer(double alpha, int k);

//! Thread-safe cache of systems keyed by the effective (clipped) interval.
//! Interior fit points all clip to the full kernel support and share one entry.
class SystemCache
{
public:
  SystemCache(const KernelSpec& kernel, int max_degree, BoundaryMode mode);

  std::shared_ptr<const PolySystem> get(double a_tilde, double b_tilde);

  std::size_t size() const;
  int max_degree() const { return max_degree_; }
  const KernelSpec& kernel() const { return kernel_; }
  BoundaryMode mode() const { return mode_; }

private:
  struct Key
  {
    double lo;
    double hi;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash
  {
    std::size_t operator()(const Key& k) const noexcept;
  };

  KernelSpec kernel_;
  int max_degree_;
  BoundaryMode mode_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, std::shared_ptr<const PolySystem>, KeyHash> systems_;
};

} // namespace lorpe
