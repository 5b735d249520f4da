#pragma once

#include "lorpe/lorpe.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace lorpe {

enum class DistributionFamily
{
  beta44,          //!< 35/32 (1 - x^2)^3 on [-1, 1]
  std_normal,      //!< N(0, 1)
  normal_mix1,     //!< 3/4 N(0, 1) + 1/4 N(3/2, 1/9)
  exp1,            //!< Exponential(1)
  trunc_normal0,   //!< N(0, 1) restricted to [0, inf)
  trunc_normal_m1, //!< N(0, 1) restricted to [-1, inf)
  normal_mix2,     //!< 2/3 N(0, 1) + 1/3 N(0, 1/100)
  trunc_t          //!< Student t(df) restricted to [lo, hi]
};

//! Target densities for the simulation studies, with analytic pdf and cdf.
class DistributionSpec
{
public:
  static DistributionSpec beta44() { return DistributionSpec(DistributionFamily::beta44); }
  static DistributionSpec std_normal() { return DistributionSpec(DistributionFamily::std_normal); }
  static DistributionSpec normal_mix1() { return DistributionSpec(DistributionFamily::normal_mix1); }
  static DistributionSpec exp1() { return DistributionSpec(DistributionFamily::exp1); }
  static DistributionSpec trunc_normal0() { return DistributionSpec(DistributionFamily::trunc_normal0); }
  static DistributionSpec trunc_normal_m1() { return DistributionSpec(DistributionFamily::trunc_normal_m1); }
  static DistributionSpec normal_mix2() { return DistributionSpec(DistributionFamily::normal_mix2); }
  static DistributionSpec trunc_t(double df, double lo, double hi);

  //! beta44 | normal | mix1 | exp1 | truncnorm0 | truncnormm1 | mix2 | trunct<df>
  //! (the last restricted to [-1, 2]).
  static DistributionSpec from_name(std::string_view name);
  std::string name() const;

  DistributionFamily family() const { return family_; }
  Support support() const;

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;

  double draw(std::mt19937_64& rng) const;
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

private:
  explicit DistributionSpec(DistributionFamily family)
    : family_(family)
  {}

  DistributionFamily family_;
  double df_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double mass_ = 1.0; // untruncated probability of [lo, hi] for trunc_t
  double cdf_lo_ = 0.0;
};

} // namespace lorpe
