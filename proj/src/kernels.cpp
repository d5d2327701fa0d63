#include "renyi/kernels.hpp"
#include "renyi/error.hpp"

#include <cmath>
#include <numbers>

namespace renyi {

KernelFamily
parse_kernel_family(std::string_view name)
{
  if (name == "gaussian")
    return KernelFamily::gaussian;
  if (name == "uniform")
    return KernelFamily::uniform;
  if (name == "epanechnikov")
    return KernelFamily::epanechnikov;
  throw Error(ErrorCode::invalid_argument,
              "unknown kernel '" + std::string(name) +
                "' (expected gaussian, uniform or epanechnikov)");
}

std::string_view
to_string(KernelFamily family)
{
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::uniform: return "uniform";
    case KernelFamily::epanechnikov: return "epanechnikov";
  }
  return "unknown";
}

double
unit_ball_volume(std::size_t d)
{
  const double h = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

KernelSpec::KernelSpec(KernelFamily family, std::size_t dim, double scale)
  : family_(family)
  , dim_(dim)
  , scale_(scale)
{
  if (dim == 0)
    throw Error(ErrorCode::dimension_mismatch, "kernel dimension must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw Error(ErrorCode::invalid_argument, "kernel scale must be positive");
  const double d = static_cast<double>(dim);
  const double cd = unit_ball_volume(dim);
  switch (family) {
    case KernelFamily::gaussian:
      norm_ = std::pow(2.0 * std::numbers::pi, -0.5 * d);
      break;
    case KernelFamily::uniform:
      norm_ = 1.0 / cd;
      break;
    case KernelFamily::epanechnikov:
      // int_{|u|<=1} (1 - |u|^2) du = c_d * 2 / (d + 2)
      norm_ = (d + 2.0) / (2.0 * cd);
      break;
  }
  norm_ *= scale;
}

double
KernelSpec::eval(std::span<const double> u) const
{
  if (u.size() != dim_) {
    throw Error(ErrorCode::dimension_mismatch,
                "kernel of dimension " + std::to_string(dim_) +
                  " evaluated at a " + std::to_string(u.size()) + "-vector");
  }
  double r2 = 0.0;
  for (double x : u)
    r2 += x * x;
  return profile(r2);
}

} // namespace renyi
