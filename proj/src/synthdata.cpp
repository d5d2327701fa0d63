#include "renyi/synthdata.hpp"
#include "renyi/error.hpp"
#include "renyi/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace renyi {

namespace {

void
check_r(double r)
{
  if (!std::isfinite(r) || !(std::abs(r) < 1.0)) {
    throw Error(ErrorCode::bad_correlation,
                "correlation must satisfy |r| < 1, got " + std::to_string(r));
  }
}

// 1 - r^2 without cancellation near |r| = 1
double
one_minus_r2(double r)
{
  return (1.0 - r) * (1.0 + r);
}

double
gauss2d_density(double r, double x, double y)
{
  const double s = one_minus_r2(r);
  const double q = (x * x - 2.0 * r * x * y + y * y) / s;
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(s));
}

} // namespace

Family
parse_family(std::string_view name)
{
  if (name == "gauss2d")
    return Family::gauss2d;
  if (name == "gauss6d" || name == "gauss6d-block")
    return Family::gauss6d_block;
  if (name == "mixture2d")
    return Family::mixture2d;
  throw Error(ErrorCode::invalid_argument,
              "unknown family '" + std::string(name) +
                "' (expected gauss2d, gauss6d or mixture2d)");
}

std::string_view
to_string(Family family)
{
  switch (family) {
    case Family::gauss2d: return "gauss2d";
    case Family::gauss6d_block: return "gauss6d";
    case Family::mixture2d: return "mixture2d";
  }
  return "unknown";
}

std::size_t
family_dim(Family family)
{
  return family == Family::gauss6d_block ? 6 : 2;
}

Dataset
sample(const SampleSpec& spec, std::uint64_t trial)
{
  check_r(spec.r);
  if (spec.n < 2)
    throw Error(ErrorCode::empty_dataset, "need at least 2 samples");
  const std::size_t d = family_dim(spec.family);
  const double s = std::sqrt(one_minus_r2(spec.r));

  auto gen = make_stream(spec.seed, trial, StreamPurpose::gaussian);
  auto comp = make_stream(spec.seed, trial, StreamPurpose::component);
  std::normal_distribution<double> gauss(0.0, 1.0);

  PointMatrix pts(static_cast<Eigen::Index>(spec.n),
                  static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    double r = spec.r;
    if (spec.family == Family::mixture2d && (comp() >> 63))
      r = -r;
    // lower Cholesky factor of [[1, r], [r, 1]] is [[1, 0], [r, s]]
    for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(d); b += 2) {
      const double z1 = gauss(gen);
      const double z2 = gauss(gen);
      pts(i, b) = z1;
      pts(i, b + 1) = r * z1 + s * z2;
    }
  }
  return Dataset(std::move(pts),
                 std::string(to_string(spec.family)) +
                   " r=" + std::to_string(spec.r) +
                   " seed=" + std::to_string(spec.seed) +
                   " trial=" + std::to_string(trial));
}

double
ground_truth(Family family, double alpha, double r)
{
  check_r(r);
  const double pi = std::numbers::pi;
  const double s = one_minus_r2(r);
  if (family == Family::gauss2d && alpha == 2.0)
    return 1.0 / (4.0 * pi * std::sqrt(s));
  if (family == Family::gauss2d && alpha == 3.0)
    return 1.0 / (12.0 * pi * pi * s);
  if (family == Family::gauss6d_block && alpha == 2.0)
    return std::pow(4.0 * pi * std::sqrt(s), -3.0);
  if (family == Family::mixture2d && alpha == 2.0)
    return 1.0 / (8.0 * pi * std::sqrt(s)) + 1.0 / (8.0 * pi);
  throw Error(ErrorCode::unsupported,
              "no closed-form ground truth for family " +
                std::string(to_string(family)) +
                " at alpha=" + std::to_string(alpha));
}

double
family_density(Family family, double r, std::span<const double> x)
{
  check_r(r);
  if (x.size() != family_dim(family))
    throw Error(ErrorCode::dimension_mismatch, "point dimension differs");
  switch (family) {
    case Family::gauss2d:
      return gauss2d_density(r, x[0], x[1]);
    case Family::gauss6d_block:
      return gauss2d_density(r, x[0], x[1]) * gauss2d_density(r, x[2], x[3]) *
             gauss2d_density(r, x[4], x[5]);
    case Family::mixture2d:
      return 0.5 * (gauss2d_density(r, x[0], x[1]) +
                    gauss2d_density(-r, x[0], x[1]));
  }
  return 0.0;
}

double
quadrature_oracle(Family family, double alpha, double r, double rel_tol)
{
  check_r(r);
  if (family == Family::gauss6d_block) {
    const double block = quadrature_oracle(Family::gauss2d, alpha, r, rel_tol);
    return block * block * block;
  }

  using boost::math::quadrature::gauss_kronrod;
  constexpr double L = 10.0;
  constexpr unsigned depth = 20;
  bool inner_failed = false;

  auto inner = [&](double x) {
    auto f = [&](double y) {
      const double p[2] = { x, y };
      return std::pow(family_density(family, r, p), alpha);
    };
    double err = 0.0;
    double l1 = 0.0;
    const double v =
      gauss_kronrod<double, 61>::integrate(f, -L, L, depth, rel_tol, &err, &l1);
    if (err > rel_tol * l1 + 1e-300)
      inner_failed = true;
    return v;
  };
  double err = 0.0;
  double l1 = 0.0;
  const double v =
    gauss_kronrod<double, 61>::integrate(inner, -L, L, depth, rel_tol, &err, &l1);
  if (inner_failed || !std::isfinite(v) || err > rel_tol * l1) {
    throw Error(ErrorCode::non_convergence,
                "quadrature did not reach relative tolerance " +
                  std::to_string(rel_tol) + " (error estimate " +
                  std::to_string(err) + ")");
  }
  return v;
}

} // namespace renyi
