#pragma once

#include "renyi/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace renyi {

struct EstimatorConfig
{
  std::size_t k = 5;
  double alpha = 2.0;
  KernelFamily kernel = KernelFamily::gaussian;
  // Multiplies the normalized kernel; ignored by the LLDE path.
  double kernel_scale = 1.0;
  // Bound on the standardized functional c_d * n * rho^d * fhat. Values
  // above it are clamped (and, for alpha < 1, values below 1/h_cap).
  double h_cap = 1e12;
  bool keep_terms = false;
  // Fails with SingularSigma instead of regularizing when false.
  bool regularize = true;
  unsigned threads = 1;
};

//! What produced an estimate, kept next to the value so a result can be
//! reproduced from its own record.
struct ConfigEcho
{
  std::string method;
  std::size_t k = 0;
  double alpha = 0.0;
  std::string kernel;
  double bias = 1.0;
  std::uint64_t bias_seed = 0;
  std::size_t n = 0;
  std::size_t d = 0;
};

struct EstimateResult
{
  double value = 0.0;
  // f-hat_i^{alpha-1} per sample, only when EstimatorConfig::keep_terms.
  std::optional<std::vector<double>> per_point_terms;
  ConfigEcho config;
  std::size_t cap_hits = 0;
  std::size_t regularized = 0;
};

} // namespace renyi
