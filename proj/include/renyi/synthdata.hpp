#pragma once

#include "renyi/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace renyi {

//! Synthetic families: gauss2d is N(0, [[1,r],[r,1]]); gauss6d stacks
//! three independent gauss2d blocks; mixture2d is an even mixture of the
//! gauss2d laws with correlation +r and -r.
enum class Family
{
  gauss2d,
  gauss6d_block,
  mixture2d
};

Family parse_family(std::string_view name);
std::string_view to_string(Family family);
std::size_t family_dim(Family family);

struct SampleSpec
{
  Family family = Family::gauss2d;
  double r = 0.0;
  std::size_t n = 100;
  std::uint64_t seed = 1;
};

//! n i.i.d. draws, deterministic in (spec, trial). Throws BadCorrelation
//! unless |r| < 1.
Dataset sample(const SampleSpec& spec, std::uint64_t trial);

//! Closed-form J_alpha. Supported: gauss2d alpha in {2, 3}; gauss6d and
//! mixture2d alpha = 2. Anything else throws Unsupported.
double ground_truth(Family family, double alpha, double r);

//! int f^alpha by nested adaptive Gauss-Kronrod on [-10, 10]^2 (gauss6d as
//! the cube of its 2-d block). Throws NonConvergence if the error estimate
//! misses `rel_tol`.
double quadrature_oracle(Family family,
                         double alpha,
                         double r,
                         double rel_tol = 1e-9);

//! Density of the family at a point of matching dimension.
double family_density(Family family, double r, std::span<const double> x);

} // namespace renyi
