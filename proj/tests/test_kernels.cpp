#include "renyi/error.hpp"
#include "renyi/kernels.hpp"
#include "support.hpp"

#include <doctest.h>
#include <numbers>

using namespace renyi;

TEST_SUITE("kernels")
{
  TEST_CASE("peak values")
  {
    const double z1[1] = { 0.0 };
    CHECK(KernelSpec(KernelFamily::gaussian, 1).eval(z1) ==
          doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(KernelSpec(KernelFamily::epanechnikov, 1).eval(z1) ==
          doctest::Approx(0.75).epsilon(1e-15));
    const double half[2] = { 0.3, 0.4 };
    CHECK(KernelSpec(KernelFamily::uniform, 2).eval(half) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    const double out[2] = { 0.8, 0.61 };
    CHECK(KernelSpec(KernelFamily::uniform, 2).eval(out) == 0.0);
  }

  TEST_CASE("unit ball volume")
  {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.1887902047863905).epsilon(1e-15));
  }

  TEST_CASE("dimension mismatch")
  {
    const double u[2] = { 0.0, 0.0 };
    CHECK_THROWS_AS(KernelSpec(KernelFamily::gaussian, 3).eval(u), Error);
    CHECK_THROWS_AS(parse_kernel_family("triangle"), Error);
    CHECK(parse_kernel_family("epanechnikov") == KernelFamily::epanechnikov);
  }

  TEST_CASE("kernels integrate to one")
  {
    for (auto f : { KernelFamily::gaussian, KernelFamily::uniform,
                    KernelFamily::epanechnikov }) {
      // d = 1, midpoint rule
      const KernelSpec k1(f, 1);
      const int n1 = 200000;
      const double a = 8.0, h1 = 2 * a / n1;
      double s1 = 0.0;
      for (int i = 0; i < n1; ++i) {
        const double u[1] = { -a + (i + 0.5) * h1 };
        s1 += k1.eval(u);
      }
      CHECK(std::abs(s1 * h1 - 1.0) < 1e-3);

      const KernelSpec k2(f, 2);
      const int n2 = 1600;
      const double h2 = 2 * a / n2;
      double s2 = 0.0;
      for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j) {
          const double u[2] = { -a + (i + 0.5) * h2, -a + (j + 0.5) * h2 };
          s2 += k2.eval(u);
        }
      CHECK(std::abs(s2 * h2 * h2 - 1.0) < 1e-3);
    }
  }

  TEST_CASE("radial symmetry")
  {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (std::size_t d : { 2u, 3u, 5u }) {
      const Eigen::MatrixXd rot = testing::random_rotation(d, d);
      for (auto f : { KernelFamily::gaussian, KernelFamily::uniform,
                      KernelFamily::epanechnikov }) {
        const KernelSpec k(f, d);
        for (int t = 0; t < 100; ++t) {
          Eigen::VectorXd u(d);
          for (auto& x : u)
            x = 0.6 * g(rng);
          const Eigen::VectorXd v = rot * u;
          const double a = k.eval({ u.data(), d });
          const double b = k.eval({ v.data(), d });
          // skip points sitting on the support edge within rounding
          if (f != KernelFamily::gaussian && std::abs(u.norm() - 1.0) < 1e-9)
            continue;
          CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
        }
      }
    }
  }

  TEST_CASE("gaussian tail bound with C = 1")
  {
    for (std::size_t d : { 1u, 2u, 3u }) {
      const KernelSpec k(KernelFamily::gaussian, d);
      double worst = 0.0;
      for (int i = 0; i <= 4900; ++i) {
        const double r = 1.0 + i * 0.01;
        worst = std::max(worst, k.profile(r * r) * std::pow(r, 2.0 * d));
      }
      CHECK(worst < 1.0);
    }
  }

  TEST_CASE("profile is nonincreasing and scale multiplies")
  {
    for (auto f : { KernelFamily::gaussian, KernelFamily::uniform,
                    KernelFamily::epanechnikov }) {
      const KernelSpec k(f, 3), k2(f, 3, 2.0);
      double prev = k.profile(0.0);
      for (int i = 1; i < 300; ++i) {
        const double r2 = i * 0.01;
        CHECK(k.profile(r2) <= prev);
        CHECK(k2.profile(r2) == doctest::Approx(2.0 * k.profile(r2)).epsilon(1e-15));
        prev = k.profile(r2);
      }
    }
  }
}
