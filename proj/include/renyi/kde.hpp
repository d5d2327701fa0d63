#pragma once

#include "renyi/bias_mc.hpp"
#include "renyi/estimate.hpp"
#include "renyi/kernels.hpp"
#include "renyi/neighbors.hpp"

namespace renyi {

//! KDE at sample i with bandwidth rho_{k,i}, summed over the truncation
//! set of m = truncation_size(n, k) neighbors.
double kde_density_at(const NeighborIndex& index,
                      const KernelSpec& kernel,
                      std::size_t k,
                      std::size_t i);

//! Debiased resubstitution estimate of J_alpha. `bias` must be a KDE entry
//! for (k, d, alpha, kernel family).
EstimateResult estimate_J_kde(const NeighborIndex& index,
                              const EstimatorConfig& config,
                              const BiasEntry& bias);
EstimateResult estimate_J_kde(const Dataset& data,
                              const EstimatorConfig& config,
                              const BiasEntry& bias);

//! log(J) / (1 - alpha). Throws AlphaOne, NonPositiveJ.
EstimateResult estimate_H_kde(const NeighborIndex& index,
                              const EstimatorConfig& config,
                              const BiasEntry& bias);
EstimateResult estimate_H_kde(const Dataset& data,
                              const EstimatorConfig& config,
                              const BiasEntry& bias);

} // namespace renyi
