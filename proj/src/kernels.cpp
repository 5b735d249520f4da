#include "lorpe/kernels.hpp"
#include "lorpe/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace lorpe {

namespace {

constexpr double gauss_cutoff = 12.0;

} // namespace

const char* to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::invalid_argument:
      return "invalid-argument";
    case ErrorCode::quadrature_failure:
      return "quadrature-failure";
    case ErrorCode::degenerate_interval:
      return "degenerate-interval";
    case ErrorCode::ill_conditioned:
      return "ill-conditioned";
    case ErrorCode::degree_out_of_range:
      return "degree-out-of-range";
    case ErrorCode::all_zero_density:
      return "all-zero-density";
    case ErrorCode::degenerate_sample:
      return "degenerate-sample";
    case ErrorCode::all_rejected:
      return "all-rejected";
  }
  return "unknown";
}

KernelSpec KernelSpec::gaussian()
{
  return KernelSpec(KernelFamily::gaussian, 0.0, 1.0 / std::sqrt(2.0 * std::numbers::pi));
}

KernelSpec KernelSpec::symmetric_beta(double alpha)
{
  if (!(alpha >= 0.5))
    throw Error(ErrorCode::invalid_argument, "symmetric beta kernel needs alpha >= 1/2");
  double c = std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 0.5)) /
             std::sqrt(std::numbers::pi);
  return KernelSpec(KernelFamily::symmetric_beta, alpha, c);
}

KernelSpec KernelSpec::uniform()
{
  return KernelSpec(KernelFamily::uniform, 0.5, 0.5);
}

KernelSpec KernelSpec::from_name(std::string_view name)
{
  if (name == "gauss" || name == "gaussian")
    return gaussian();
  if (name == "epan" || name == "epanechnikov")
    return epanechnikov();
  if (name == "biweight")
    return biweight();
  if (name == "triweight")
    return triweight();
  if (name == "quadweight")
    return quadweight();
  if (name == "uniform")
    return uniform();
  throw Error(ErrorCode::invalid_argument, "unknown kernel '" + std::string(name) + "'");
}

std::string KernelSpec::name() const
{
  switch (family_) {
    case KernelFamily::gaussian:
      return "gauss";
    case KernelFamily::uniform:
      return "uniform";
    case KernelFamily::symmetric_beta:
      if (alpha_ == 1.5)
        return "epan";
      if (alpha_ == 2.5)
        return "biweight";
      if (alpha_ == 3.5)
        return "triweight";
      if (alpha_ == 4.5)
        return "quadweight";
      return "beta(" + std::to_string(alpha_) + ")";
  }
  return "unknown";
}

double KernelSpec::half_width() const
{
  return family_ == KernelFamily::gaussian ? std::numeric_limits<double>::infinity() : 1.0;
}

double KernelSpec::effective_half_width() const
{
  return family_ == KernelFamily::gaussian ? gauss_cutoff : 1.0;
}

double KernelSpec::operator()(double y) const
{
  double ay = std::fabs(y);
  switch (family_) {
    case KernelFamily::gaussian:
      return ay <= gauss_cutoff ? norm_ * std::exp(-0.5 * y * y) : 0.0;
    case KernelFamily::uniform:
      return ay <= 1.0 ? norm_ : 0.0;
    case KernelFamily::symmetric_beta: {
      if (ay >= 1.0)
        return 0.0;
      double base = 1.0 - y * y;
      // integer powers for the common half-integer alphas
      double e = alpha_ - 0.5;
      double r = std::round(e);
      if (e == r && r <= 8.0) {
        double v = 1.0;
        for (int i = 0; i < static_cast<int>(r); ++i)
          v *= base;
        return norm_ * v;
      }
      return norm_ * std::pow(base, e);
    }
  }
  return 0.0;
}

double kernel_norm_check(const KernelSpec& kernel)
{
  using boost::math::quadrature::gauss_kronrod;
  double lim = kernel.effective_half_width();
  auto f = [&](double y) { return kernel(y); };
  double err = 0.0;
  double value = 0.0;
  if (kernel.family() == KernelFamily::gaussian) {
    // split at the mode so both panels see a monotone integrand
    double e1 = 0.0;
    double e2 = 0.0;
    value = gauss_kronrod<double, 61>::integrate(f, -lim, 0.0, 30, 1e-15, &e1) +
            gauss_kronrod<double, 61>::integrate(f, 0.0, lim, 30, 1e-15, &e2);
    err = e1 + e2;
  } else {
    value = gauss_kronrod<double, 61>::integrate(f, -lim, lim, 30, 1e-15, &err);
  }
  if (!(err <= 1e-11))
    throw Error(ErrorCode::quadrature_failure,
                "kernel normalization did not converge (error " + std::to_string(err) + ")");
  return value;
}

} // namespace lorpe
