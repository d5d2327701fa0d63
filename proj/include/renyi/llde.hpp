#pragma once

#include "renyi/bias_mc.hpp"
#include "renyi/estimate.hpp"
#include "renyi/neighbors.hpp"

#include <Eigen/Core>

namespace renyi {

//! Gaussian-weighted local moments around one sample, in bandwidth units.
//! sigma is the regularized covariance when `regularized` is set.
struct LocalMoments
{
  double S0 = 0.0;
  Eigen::VectorXd S1;
  Eigen::MatrixXd S2;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  bool regularized = false;
};

//! Derives mu and sigma from raw sums. If the smallest eigenvalue of sigma
//! is below tau = 1e-8 * max(1, tr(sigma)/d), adds tau*I (or throws
//! SingularSigma when `regularize` is false).
LocalMoments make_local_moments(double S0,
                                Eigen::VectorXd S1,
                                Eigen::MatrixXd S2,
                                bool regularize = true);

//! S0 / ((2 pi)^{d/2} |sigma|^{1/2}) * exp(-mu' sigma^{-1} mu / 2).
//! The local likelihood density is this over n * h^d.
double local_gaussian_mass(const LocalMoments& m);

//! Moments over the truncation set of sample i with bandwidth rho_{k,i}.
LocalMoments local_moments(const NeighborIndex& index,
                           std::size_t i,
                           std::size_t k,
                           bool regularize = true);

double llde_density_at(const NeighborIndex& index,
                       std::size_t i,
                       std::size_t k,
                       bool regularize = true);

//! Debiased k-LNN estimate of J_alpha. `bias` must be an LLDE entry for
//! (k, d, alpha).
EstimateResult estimate_J_klnn(const NeighborIndex& index,
                               const EstimatorConfig& config,
                               const BiasEntry& bias);
EstimateResult estimate_J_klnn(const Dataset& data,
                               const EstimatorConfig& config,
                               const BiasEntry& bias);

EstimateResult estimate_H_klnn(const NeighborIndex& index,
                               const EstimatorConfig& config,
                               const BiasEntry& bias);
EstimateResult estimate_H_klnn(const Dataset& data,
                               const EstimatorConfig& config,
                               const BiasEntry& bias);

} // namespace renyi
