#include "renyi/baselines.hpp"
#include "renyi/error.hpp"
#include "renyi/parallel.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace renyi {

double
leonenko_constant(std::size_t k, double alpha)
{
  if (alpha == 1.0)
    throw Error(ErrorCode::alpha_one, "Leonenko estimator needs alpha != 1");
  const double kk = static_cast<double>(k);
  if (k < 1 || !(kk > alpha - 1.0)) {
    throw Error(ErrorCode::invalid_k,
                "Leonenko estimator needs k > alpha - 1, got k=" +
                  std::to_string(k));
  }
  // Gamma(k + 1 - alpha) > 0 here, so lgamma carries no sign
  return std::exp((std::lgamma(kk) - std::lgamma(kk + 1.0 - alpha)) /
                  (1.0 - alpha));
}

EstimateResult
estimate_J_leonenko(const NeighborIndex& index,
                    std::size_t k,
                    double alpha,
                    unsigned threads)
{
  const double ck = leonenko_constant(k, alpha);
  const std::size_t n = index.size();
  if (k > n - 1) {
    throw Error(ErrorCode::m_too_large,
                "k=" + std::to_string(k) + " exceeds n-1=" +
                  std::to_string(n - 1));
  }
  const double d = static_cast<double>(index.dim());
  const double base = static_cast<double>(n - 1) * ck * unit_ball_volume(index.dim());

  std::vector<double> terms(n);
  parallel_for(n, threads, [&](std::size_t i) {
    terms[i] = std::pow(base * std::pow(index.rho(i, k), d), 1.0 - alpha);
  });
  double sum = 0.0;
  for (double t : terms)
    sum += t;

  EstimateResult r;
  r.value = sum / static_cast<double>(n);
  if (!std::isfinite(r.value))
    throw Error(ErrorCode::non_finite, "Leonenko estimate is not finite");
  r.config.method = "leonenko";
  r.config.k = k;
  r.config.alpha = alpha;
  r.config.n = n;
  r.config.d = index.dim();
  return r;
}

EstimateResult
estimate_J_leonenko(const Dataset& data,
                    std::size_t k,
                    double alpha,
                    unsigned threads)
{
  return estimate_J_leonenko(NeighborIndex(data), k, alpha, threads);
}

double
silverman_bandwidth(const Dataset& data)
{
  const auto& X = data.points();
  const double n = static_cast<double>(data.size());
  const double d = static_cast<double>(data.dim());
  // quadratic mean of the marginal sds, sqrt(tr(cov) / d): unlike the
  // arithmetic mean it does not change under rotations
  double total_var = 0.0;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double mean = X.col(c).mean();
    total_var += (X.col(c).array() - mean).square().sum() / (n - 1.0);
  }
  const double sigma = std::sqrt(total_var / d);
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::zero_bandwidth,
                "all samples share the same coordinates; Silverman bandwidth "
                "is 0");
  }
  return sigma * std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
}

EstimateResult
estimate_J_kde_fixed(const Dataset& data,
                     const KernelSpec& kernel,
                     double alpha,
                     std::optional<double> bandwidth,
                     unsigned threads)
{
  if (kernel.dim() != data.dim())
    throw Error(ErrorCode::dimension_mismatch, "kernel dimension differs");
  if (!std::isfinite(alpha))
    throw Error(ErrorCode::invalid_argument, "alpha must be finite");
  const std::size_t n = data.size();
  const std::size_t d = data.dim();

  EstimateResult r;
  r.config.method = "kde-fixed";
  r.config.alpha = alpha;
  r.config.kernel = kernel.name();
  r.config.n = n;
  r.config.d = d;
  if (alpha == 1.0) {
    r.value = 1.0;
    return r;
  }

  const double h = bandwidth ? *bandwidth : silverman_bandwidth(data);
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::zero_bandwidth, "bandwidth must be positive");
  const double norm =
    1.0 / (static_cast<double>(n - 1) * std::pow(h, static_cast<double>(d)));
  const double inv_h2 = 1.0 / (h * h);

  std::vector<double> terms(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto xi = data.point(i);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i)
        continue;
      const auto xj = data.point(j);
      double r2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double diff = xj[a] - xi[a];
        r2 += diff * diff;
      }
      total += kernel.profile(r2 * inv_h2);
    }
    const double f = total * norm;
    if (alpha < 1.0 && f == 0.0) {
      throw Error(ErrorCode::non_finite,
                  "density estimate is 0 at sample " + std::to_string(i) +
                    " and alpha < 1");
    }
    terms[i] = std::pow(f, alpha - 1.0);
  });
  double sum = 0.0;
  for (double t : terms)
    sum += t;
  r.value = sum / static_cast<double>(n);
  return r;
}

} // namespace renyi
