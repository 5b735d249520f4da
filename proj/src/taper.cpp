#include "lorpe/taper.hpp"
#include "lorpe/error.hpp"

#include <cmath>

namespace lorpe {

Taper Taper::from_degree(double M)
{
  if (!(M >= 0.0) || !std::isfinite(M))
    throw Error(ErrorCode::invalid_argument, "taper degree must be finite and >= 0");
  double m = std::floor(M);
  std::vector<double> t(static_cast<std::size_t>(m) + 1, 1.0);
  double frac = M - m;
  if (frac > 0.0)
    t.push_back(std::sqrt(frac));
  return Taper(std::move(t));
}

double Taper::operator[](int k) const
{
  if (k < 0 || k >= static_cast<int>(t_.size()))
    return 0.0;
  return t_[static_cast<std::size_t>(k)];
}

double Taper::effective_dof() const
{
  double s = 0.0;
  for (double v : t_)
    s += v * v;
  return s - 1.0;
}

int degrees_needed(double M)
{
  return static_cast<int>(std::ceil(M));
}

} // namespace lorpe
