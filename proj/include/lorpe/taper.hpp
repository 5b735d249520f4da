#pragma once

#include <vector>

namespace lorpe {

//! Shrinkage weights t(k) applied to the expansion terms.
//!
//! For a real degree M with m = floor(M): t(k) = 1 for k <= m,
//! t(m + 1) = sqrt(M - m), and 0 beyond, so that sum_k t(k)^2 - 1 = M.
class Taper
{
public:
  static Taper from_degree(double M);

  //! t(k); zero past the last stored weight.
  double operator[](int k) const;

  //! Largest k with a stored (possibly zero-valued) weight.
  int max_degree() const { return static_cast<int>(t_.size()) - 1; }

  //! sum_k t(k)^2 - 1.
  double effective_dof() const;

  const std::vector<double>& weights() const { return t_; }

private:
  explicit Taper(std::vector<double> t)
    : t_(std::move(t))
  {}

  std::vector<double> t_;
};

//! Number of polynomial degrees needed to represent degree M: ceil(M).
int degrees_needed(double M);

} // namespace lorpe
