#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace renyi {

enum class KernelFamily
{
  gaussian,
  uniform,
  epanechnikov
};

KernelFamily parse_kernel_family(std::string_view name);
std::string_view to_string(KernelFamily family);

//! Volume of the unit Euclidean ball in R^d, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(std::size_t d);

//! A radially symmetric kernel on R^d, normalized to integrate to `scale`
//! (1 by default). The scale only exists so that tests can check that the
//! debiased estimators cancel a constant factor on the kernel.
class KernelSpec
{
public:
  KernelSpec(KernelFamily family, std::size_t dim, double scale = 1.0);

  KernelFamily family() const { return family_; }
  std::size_t dim() const { return dim_; }
  double scale() const { return scale_; }

  //! K(u). Throws DimensionMismatch if u.size() != dim().
  double eval(std::span<const double> u) const;

  //! K as a function of the squared norm ||u||^2. Nonincreasing in r2.
  double profile(double r2) const
  {
    switch (family_) {
      case KernelFamily::gaussian:
        return norm_ * std::exp(-0.5 * r2);
      case KernelFamily::uniform:
        return r2 <= 1.0 ? norm_ : 0.0;
      case KernelFamily::epanechnikov:
        return r2 <= 1.0 ? norm_ * (1.0 - r2) : 0.0;
    }
    return 0.0;
  }

  std::string name() const { return std::string(to_string(family_)); }

private:
  KernelFamily family_;
  std::size_t dim_;
  double scale_;
  double norm_;
};

} // namespace renyi
