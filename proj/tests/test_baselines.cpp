#include "renyi/baselines.hpp"
#include "renyi/error.hpp"
#include "support.hpp"

#include <doctest.h>
#include <numbers>

using namespace renyi;

TEST_SUITE("baselines")
{
  TEST_CASE("Leonenko constant")
  {
    CHECK(leonenko_constant(3, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
    // k = 5, alpha = 3: [Gamma(5)/Gamma(3)]^{-1/2} = 12^{-1/2}
    CHECK(leonenko_constant(5, 3.0) == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-14));
    CHECK_THROWS_AS(leonenko_constant(1, 2.5), Error);
    try {
      leonenko_constant(1, 2.5);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_k);
    }
    try {
      leonenko_constant(4, 1.0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::alpha_one);
    }
  }

  TEST_CASE("Leonenko on Uniform[0,1]")
  {
    double sum = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t)
      sum += estimate_J_leonenko(testing::uniform_dataset(2000, 1, 400 + t), 5, 2.0).value;
    CHECK(std::abs(sum / trials - 1.0) < 0.1);
  }

  TEST_CASE("fixed-bandwidth KDE on two points")
  {
    const auto data = Dataset::from_rows(std::vector<double>{ 0, 1 }, 1);
    const KernelSpec g(KernelFamily::gaussian, 1);
    const double phi1 = 0.24197072451914337;
    CHECK(estimate_J_kde_fixed(data, g, 2.0, 1.0).value ==
          doctest::Approx(phi1).epsilon(1e-14));
    CHECK(estimate_J_kde_fixed(data, g, 3.0, 1.0).value ==
          doctest::Approx(phi1 * phi1).epsilon(1e-14));
    CHECK(estimate_J_kde_fixed(data, g, 1.0, 1.0).value == 1.0);
  }

  TEST_CASE("fixed-bandwidth KDE on N(0,1)")
  {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;
    std::vector<double> x(2000);
    for (auto& v : x)
      v = n01(rng);
    const auto r = estimate_J_kde_fixed(Dataset::from_rows(x, 1),
                                        KernelSpec(KernelFamily::gaussian, 1), 2.0);
    CHECK(std::abs(r.value / 0.28209479177387814 - 1.0) < 0.1);
  }

  TEST_CASE("zero bandwidth")
  {
    const auto data = Dataset::from_rows(std::vector<double>{ 1, 1, 1 }, 1);
    try {
      estimate_J_kde_fixed(data, KernelSpec(KernelFamily::gaussian, 1), 2.0);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::zero_bandwidth);
    }
  }

  TEST_CASE("scale equivariance and rigid motions")
  {
    for (std::size_t d : { 1u, 2u, 3u }) {
      const auto data = testing::random_dataset(300, d, 500 + d);
      const auto moved = testing::rigid_motion(data, 2);
      const auto scaled = data.scaled(1.7);
      for (double alpha : { 2.0, 3.0 }) {
        const double f = std::pow(1.7, -double(d) * (alpha - 1.0));
        const double l = estimate_J_leonenko(data, 5, alpha).value;
        CHECK(testing::rel_diff(estimate_J_leonenko(scaled, 5, alpha).value, f * l) < 1e-10);
        CHECK(testing::rel_diff(estimate_J_leonenko(moved, 5, alpha).value, l) < 1e-10);

        for (auto fam : { KernelFamily::gaussian, KernelFamily::epanechnikov }) {
          const KernelSpec K(fam, d);
          const double k = estimate_J_kde_fixed(data, K, alpha).value;
          CHECK(testing::rel_diff(estimate_J_kde_fixed(scaled, K, alpha).value, f * k) < 1e-10);
          CHECK(testing::rel_diff(estimate_J_kde_fixed(moved, K, alpha).value, k) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("worker count does not change results")
  {
    const auto data = testing::random_dataset(400, 2, 3);
    const KernelSpec K(KernelFamily::gaussian, 2);
    CHECK(estimate_J_leonenko(data, 5, 2.0, 1).value == estimate_J_leonenko(data, 5, 2.0, 3).value);
    CHECK(estimate_J_kde_fixed(data, K, 2.0, {}, 1).value ==
          estimate_J_kde_fixed(data, K, 2.0, {}, 3).value);
  }
}
