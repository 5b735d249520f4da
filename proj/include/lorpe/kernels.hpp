#pragma once

#include <string>
#include <string_view>

namespace lorpe {

enum class KernelFamily
{
  gaussian,
  symmetric_beta,
  uniform
};

//! Symmetric weight function K(y) in scaled coordinates y = (x - x_fit) / h.
//!
//! The symmetric-Beta family is K(y) = c_a (1 - y^2)^(a - 1/2) on [-1, 1] with
//! c_a = Gamma(a + 1) / (sqrt(pi) Gamma(a + 1/2)); a = 3/2, 5/2, 7/2, 9/2 give
//! the Epanechnikov, biweight, triweight and quadweight kernels. The Gaussian
//! is evaluated on [-12, 12] only; the discarded tail mass is below 1e-31.
class KernelSpec
{
public:
  static KernelSpec gaussian();
  static KernelSpec symmetric_beta(double alpha);
  static KernelSpec uniform();
  static KernelSpec epanechnikov() { return symmetric_beta(1.5); }
  static KernelSpec biweight() { return symmetric_beta(2.5); }
  static KernelSpec triweight() { return symmetric_beta(3.5); }
  static KernelSpec quadweight() { return symmetric_beta(4.5); }

  //! Parses gauss | epan | biweight | triweight | quadweight | uniform.
  static KernelSpec from_name(std::string_view name);

  KernelFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  std::string name() const;

  //! Half-width a_K of the true support (+inf for the Gaussian).
  double half_width() const;

  //! Half-width of the interval actually used for evaluation and quadrature.
  double effective_half_width() const;

  bool is_compact() const { return family_ != KernelFamily::gaussian; }

  double operator()(double y) const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

private:
  KernelSpec(KernelFamily family, double alpha, double norm)
    : family_(family)
    , alpha_(alpha)
    , norm_(norm)
  {}

  KernelFamily family_;
  double alpha_;
  double norm_;
};

//! Numerical integral of K over its support by adaptive Gauss-Kronrod.
//! Throws Error(quadrature_failure) when the error estimate stays above 1e-11.
double kernel_norm_check(const KernelSpec& kernel);

} // namespace lorpe
