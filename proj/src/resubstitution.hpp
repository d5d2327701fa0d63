#pragma once

// Shared skeleton of the debiased resubstitution estimators.

#include "renyi/bias_mc.hpp"
#include "renyi/error.hpp"
#include "renyi/estimate.hpp"
#include "renyi/neighbors.hpp"
#include "renyi/parallel.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace renyi::detail {

// One sample's local density, split as fhat = z / scale where
// z = c_d * n * rho^d * fhat is the scale-free functional that gets capped.
struct LocalValue
{
  double z;
  double scale;
  bool regularized = false;
};

inline void
check_config(const EstimatorConfig& c)
{
  if (c.k < 1)
    throw Error(ErrorCode::invalid_k, "k must be at least 1");
  if (!std::isfinite(c.alpha))
    throw Error(ErrorCode::invalid_argument, "alpha must be finite");
  if (!(c.h_cap > 0.0))
    throw Error(ErrorCode::invalid_argument, "h_cap must be positive");
}

inline void
check_bias(const BiasEntry& bias, const BiasKey& want)
{
  if (!(bias.key == want)) {
    throw Error(ErrorCode::bias_mismatch,
                "bias entry " + describe(bias.key) +
                  " does not match estimator " + describe(want));
  }
}

template<typename Local>
EstimateResult
resubstitute(const NeighborIndex& index,
             const EstimatorConfig& config,
             const BiasEntry& bias,
             std::string method,
             Local&& local)
{
  const std::size_t n = index.size();
  truncation_size(n, config.k); // validates k against n
  const double a1 = config.alpha - 1.0;
  const double cap = config.h_cap;

  std::vector<double> terms(n);
  std::vector<char> capped(n, 0);
  std::vector<char> regularized(n, 0);
  parallel_for(n, config.threads, [&](std::size_t i) {
    const LocalValue v = local(i);
    double z = v.z;
    if (a1 < 0.0 && z == 0.0) {
      throw Error(ErrorCode::non_finite,
                  "density estimate is 0 at sample " + std::to_string(i) +
                    " and alpha < 1");
    }
    if (z > cap) {
      z = cap;
      capped[i] = 1;
    } else if (a1 < 0.0 && z < 1.0 / cap) {
      z = 1.0 / cap;
      capped[i] = 1;
    }
    regularized[i] = v.regularized ? 1 : 0;
    const double t = std::pow(z / v.scale, a1);
    if (!std::isfinite(t)) {
      throw Error(ErrorCode::non_finite,
                  "non-finite term at sample " + std::to_string(i));
    }
    terms[i] = t;
  });

  double sum = 0.0;
  EstimateResult r;
  for (std::size_t i = 0; i < n; ++i) {
    sum += terms[i];
    r.cap_hits += static_cast<std::size_t>(capped[i]);
    r.regularized += static_cast<std::size_t>(regularized[i]);
  }
  r.value = sum / (static_cast<double>(n) * bias.bias);
  if (!std::isfinite(r.value))
    throw Error(ErrorCode::non_finite, "estimate is not finite");
  if (config.keep_terms)
    r.per_point_terms = std::move(terms);
  r.config.method = std::move(method);
  r.config.k = config.k;
  r.config.alpha = config.alpha;
  r.config.kernel = std::string(to_string(bias.key.kernel));
  r.config.bias = bias.bias;
  r.config.bias_seed = bias.seed;
  r.config.n = n;
  r.config.d = index.dim();
  return r;
}

inline EstimateResult
renyi_from_j(EstimateResult j)
{
  const double alpha = j.config.alpha;
  if (!(j.value > 0.0)) {
    throw Error(ErrorCode::non_positive_j,
                "J estimate " + std::to_string(j.value) +
                  " is not positive; entropy undefined");
  }
  j.value = std::log(j.value) / (1.0 - alpha);
  return j;
}

inline void
check_alpha_not_one(double alpha)
{
  if (alpha == 1.0) {
    throw Error(ErrorCode::alpha_one,
                "Renyi entropy of order 1 is not defined by this estimator");
  }
}

} // namespace renyi::detail
