#pragma once

#include "renyi/estimate.hpp"
#include "renyi/kernels.hpp"
#include "renyi/neighbors.hpp"

#include <optional>

namespace renyi {

//! [Gamma(k) / Gamma(k + 1 - alpha)]^{1/(1-alpha)}.
double leonenko_constant(std::size_t k, double alpha);

//! Classical k-NN resubstitution estimate of J_alpha,
//! (1/n) sum_i [(n-1) C_k c_d rho_{k,i}^d]^{1-alpha}.
//! Throws AlphaOne, InvalidK (k <= alpha - 1).
EstimateResult estimate_J_leonenko(const NeighborIndex& index,
                                   std::size_t k,
                                   double alpha,
                                   unsigned threads = 1);
EstimateResult estimate_J_leonenko(const Dataset& data,
                                   std::size_t k,
                                   double alpha,
                                   unsigned threads = 1);

//! Silverman's rule: sigma * (4 / ((d + 2) n))^{1/(d+4)}, sigma = sqrt(tr(cov)/d)
//! the quadratic mean of the marginal sds. Throws ZeroBandwidth if sigma is 0.
double silverman_bandwidth(const Dataset& data);

//! Leave-one-out fixed-bandwidth KDE plug-in estimate of J_alpha. Uses the
//! Silverman bandwidth when `bandwidth` is empty. O(n^2).
EstimateResult estimate_J_kde_fixed(const Dataset& data,
                                    const KernelSpec& kernel,
                                    double alpha,
                                    std::optional<double> bandwidth = {},
                                    unsigned threads = 1);

} // namespace renyi
