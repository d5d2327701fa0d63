#include "renyi/kde.hpp"
#include "resubstitution.hpp"

#include <cmath>

namespace renyi {

namespace {

// sum_j K((X_j - X_i) / rho) and rho, over the truncation set.
std::pair<double, double>
kernel_sum(const NeighborIndex& index,
           const KernelSpec& kernel,
           std::size_t k,
           std::size_t i)
{
  const std::size_t m = truncation_size(index.size(), k);
  const auto nbrs = index.knn(i, m);
  const double rho = nbrs.entries[k - 1].distance;
  double total = 0.0;
  for (const auto& nb : nbrs.entries) {
    const double u = nb.distance / rho;
    total += kernel.profile(u * u);
  }
  return { total, rho };
}

} // namespace

double
kde_density_at(const NeighborIndex& index,
               const KernelSpec& kernel,
               std::size_t k,
               std::size_t i)
{
  if (kernel.dim() != index.dim())
    throw Error(ErrorCode::dimension_mismatch, "kernel dimension differs");
  if (k < 1)
    throw Error(ErrorCode::invalid_k, "k must be at least 1");
  const auto [total, rho] = kernel_sum(index, kernel, k, i);
  const double nrd = static_cast<double>(index.size()) *
                     std::pow(rho, static_cast<double>(index.dim()));
  return total / nrd;
}

EstimateResult
estimate_J_kde(const NeighborIndex& index,
               const EstimatorConfig& config,
               const BiasEntry& bias)
{
  detail::check_config(config);
  const std::size_t d = index.dim();
  detail::check_bias(
    bias, { config.k, d, config.alpha, EstimatorKind::kde, config.kernel });
  const KernelSpec kernel(config.kernel, d, config.kernel_scale);
  const double cd = unit_ball_volume(d);
  const double n = static_cast<double>(index.size());

  return detail::resubstitute(
    index, config, bias, "kde", [&](std::size_t i) {
      const auto [total, rho] = kernel_sum(index, kernel, config.k, i);
      const double scale = cd * n * std::pow(rho, static_cast<double>(d));
      return detail::LocalValue{ cd * total, scale };
    });
}

EstimateResult
estimate_J_kde(const Dataset& data,
               const EstimatorConfig& config,
               const BiasEntry& bias)
{
  return estimate_J_kde(NeighborIndex(data), config, bias);
}

EstimateResult
estimate_H_kde(const NeighborIndex& index,
               const EstimatorConfig& config,
               const BiasEntry& bias)
{
  detail::check_alpha_not_one(config.alpha);
  return detail::renyi_from_j(estimate_J_kde(index, config, bias));
}

EstimateResult
estimate_H_kde(const Dataset& data,
               const EstimatorConfig& config,
               const BiasEntry& bias)
{
  return estimate_H_kde(NeighborIndex(data), config, bias);
}

} // namespace renyi
