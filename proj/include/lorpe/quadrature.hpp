#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lorpe {

//! Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

//! Returns the n-point rule; rules are computed once and cached.
const GaussLegendreRule& gauss_legendre(std::size_t n);

//! Composite trapezoid rule on a (possibly non-uniform) grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

} // namespace lorpe
