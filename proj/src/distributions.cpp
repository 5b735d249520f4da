#include "lorpe/distributions.hpp"
#include "lorpe/error.hpp"
#include "lorpe/random.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace lorpe {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double phi(double z)
{
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double Phi(double z)
{
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_pdf(double x, double mu, double sd)
{
  return phi((x - mu) / sd) / sd;
}

double normal_cdf(double x, double mu, double sd)
{
  return Phi((x - mu) / sd);
}

} // namespace

DistributionSpec DistributionSpec::trunc_t(double df, double lo, double hi)
{
  if (!(df > 0.0) || !(lo < hi))
    throw Error(ErrorCode::invalid_argument, "truncated t needs df > 0 and lo < hi");
  DistributionSpec d(DistributionFamily::trunc_t);
  d.df_ = df;
  d.lo_ = lo;
  d.hi_ = hi;
  boost::math::students_t_distribution<double> t(df);
  d.cdf_lo_ = boost::math::cdf(t, lo);
  d.mass_ = boost::math::cdf(t, hi) - d.cdf_lo_;
  return d;
}

DistributionSpec DistributionSpec::from_name(std::string_view name)
{
  if (name == "beta44")
    return beta44();
  if (name == "normal" || name == "norm")
    return std_normal();
  if (name == "mix1")
    return normal_mix1();
  if (name == "exp1")
    return exp1();
  if (name == "truncnorm0")
    return trunc_normal0();
  if (name == "truncnormm1")
    return trunc_normal_m1();
  if (name == "mix2")
    return normal_mix2();
  if (name.starts_with("trunct")) {
    std::string df(name.substr(6));
    try {
      return trunc_t(std::stod(df), -1.0, 2.0);
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown distribution '" + std::string(name) + "'");
}

std::string DistributionSpec::name() const
{
  switch (family_) {
    case DistributionFamily::beta44:
      return "beta44";
    case DistributionFamily::std_normal:
      return "normal";
    case DistributionFamily::normal_mix1:
      return "mix1";
    case DistributionFamily::exp1:
      return "exp1";
    case DistributionFamily::trunc_normal0:
      return "truncnorm0";
    case DistributionFamily::trunc_normal_m1:
      return "truncnormm1";
    case DistributionFamily::normal_mix2:
      return "mix2";
    case DistributionFamily::trunc_t: {
      double r = std::round(df_);
      std::string df = r == df_ ? std::to_string(static_cast<int>(r)) : std::to_string(df_);
      return "trunct" + df;
    }
  }
  return "unknown";
}

Support DistributionSpec::support() const
{
  switch (family_) {
    case DistributionFamily::beta44:
      return { -1.0, 1.0 };
    case DistributionFamily::exp1:
    case DistributionFamily::trunc_normal0:
      return { 0.0, inf };
    case DistributionFamily::trunc_normal_m1:
      return { -1.0, inf };
    case DistributionFamily::trunc_t:
      return { lo_, hi_ };
    default:
      return { -inf, inf };
  }
}

double DistributionSpec::pdf(double x) const
{
  switch (family_) {
    case DistributionFamily::beta44: {
      if (std::fabs(x) >= 1.0)
        return 0.0;
      double b = 1.0 - x * x;
      return 35.0 / 32.0 * b * b * b;
    }
    case DistributionFamily::std_normal:
      return phi(x);
    case DistributionFamily::normal_mix1:
      return 0.75 * phi(x) + 0.25 * normal_pdf(x, 1.5, 1.0 / 3.0);
    case DistributionFamily::exp1:
      return x >= 0.0 ? std::exp(-x) : 0.0;
    case DistributionFamily::trunc_normal0:
      return x >= 0.0 ? 2.0 * phi(x) : 0.0;
    case DistributionFamily::trunc_normal_m1:
      return x >= -1.0 ? phi(x) / Phi(1.0) : 0.0;
    case DistributionFamily::normal_mix2:
      return 2.0 / 3.0 * phi(x) + 1.0 / 3.0 * normal_pdf(x, 0.0, 0.1);
    case DistributionFamily::trunc_t:
      if (x < lo_ || x > hi_)
        return 0.0;
      return boost::math::pdf(boost::math::students_t_distribution<double>(df_), x) / mass_;
  }
  return 0.0;
}

double DistributionSpec::cdf(double x) const
{
  switch (family_) {
    case DistributionFamily::beta44: {
      if (x <= -1.0)
        return 0.0;
      if (x >= 1.0)
        return 1.0;
      double x2 = x * x;
      return 0.5 + 35.0 / 32.0 * x * (1.0 - x2 + 0.6 * x2 * x2 - x2 * x2 * x2 / 7.0);
    }
    case DistributionFamily::std_normal:
      return Phi(x);
    case DistributionFamily::normal_mix1:
      return 0.75 * Phi(x) + 0.25 * normal_cdf(x, 1.5, 1.0 / 3.0);
    case DistributionFamily::exp1:
      return x > 0.0 ? -std::expm1(-x) : 0.0;
    case DistributionFamily::trunc_normal0:
      return x > 0.0 ? 2.0 * Phi(x) - 1.0 : 0.0;
    case DistributionFamily::trunc_normal_m1:
      return x > -1.0 ? (Phi(x) - Phi(-1.0)) / Phi(1.0) : 0.0;
    case DistributionFamily::normal_mix2:
      return 2.0 / 3.0 * Phi(x) + 1.0 / 3.0 * normal_cdf(x, 0.0, 0.1);
    case DistributionFamily::trunc_t: {
      if (x <= lo_)
        return 0.0;
      if (x >= hi_)
        return 1.0;
      boost::math::students_t_distribution<double> t(df_);
      return (boost::math::cdf(t, x) - cdf_lo_) / mass_;
    }
  }
  return 0.0;
}

double DistributionSpec::quantile(double p) const
{
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::invalid_argument, "quantile level must be in (0, 1)");
  Support s = support();
  double lo = s.finite_lo() ? s.lo : -1.0;
  double hi = s.finite_hi() ? s.hi : 1.0;
  while (cdf(lo) > p)
    lo -= 2.0 * (hi - lo);
  while (cdf(hi) < p)
    hi += 2.0 * (hi - lo);
  auto f = [&](double x) { return cdf(x) - p; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

double DistributionSpec::draw(std::mt19937_64& rng) const
{
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (family_) {
    case DistributionFamily::beta44: {
      std::gamma_distribution<double> g(4.0, 1.0);
      double u = g(rng);
      double v = g(rng);
      return 2.0 * u / (u + v) - 1.0;
    }
    case DistributionFamily::std_normal:
      return norm(rng);
    case DistributionFamily::normal_mix1: {
      double z = norm(rng);
      return unif(rng) < 0.75 ? z : 1.5 + z / 3.0;
    }
    case DistributionFamily::exp1:
      return std::exponential_distribution<double>(1.0)(rng);
    case DistributionFamily::trunc_normal0:
      return std::fabs(norm(rng));
    case DistributionFamily::trunc_normal_m1:
      for (;;) {
        double z = norm(rng);
        if (z >= -1.0)
          return z;
      }
    case DistributionFamily::normal_mix2: {
      double z = norm(rng);
      return unif(rng) < 2.0 / 3.0 ? z : 0.1 * z;
    }
    case DistributionFamily::trunc_t: {
      std::student_t_distribution<double> t(df_);
      for (;;) {
        double x = t(rng);
        if (x >= lo_ && x <= hi_)
          return x;
      }
    }
  }
  return 0.0;
}

std::vector<double> DistributionSpec::sample(std::size_t n, std::uint64_t seed) const
{
  auto rng = make_stream(seed, 0);
  std::vector<double> out(n);
  for (double& x : out)
    x = draw(rng);
  return out;
}

} // namespace lorpe
