#pragma once

// Test-only helpers and independent oracles.

#include "renyi/dataset.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#ifndef RENYI_DEFAULT_BIAS_TABLE
#define RENYI_DEFAULT_BIAS_TABLE "data/bias_table.csv"
#endif

namespace testing {

inline renyi::Dataset
random_dataset(std::size_t n, std::size_t d, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  renyi::PointMatrix pts(static_cast<Eigen::Index>(n),
                         static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < pts.cols(); ++j)
      pts(i, j) = g(rng);
  return renyi::Dataset(std::move(pts));
}

inline renyi::Dataset
uniform_dataset(std::size_t n, std::size_t d, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  renyi::PointMatrix pts(static_cast<Eigen::Index>(n),
                         static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < pts.cols(); ++j)
      pts(i, j) = u(rng);
  return renyi::Dataset(std::move(pts));
}

// Haar-random orthogonal matrix.
inline Eigen::MatrixXd
random_rotation(std::size_t d, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd s = qr.matrixQR().diagonal().array().sign();
  return q * s.asDiagonal();
}

inline renyi::Dataset
rigid_motion(const renyi::Dataset& data, std::uint64_t seed)
{
  const auto d = data.dim();
  const Eigen::MatrixXd rot = random_rotation(d, seed);
  Eigen::RowVectorXd shift(d);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (Eigen::Index j = 0; j < shift.size(); ++j)
    shift(j) = u(rng);
  renyi::PointMatrix moved = (data.points() * rot.transpose()).rowwise() + shift;
  return renyi::Dataset(std::move(moved));
}

inline double
rel_diff(double a, double b)
{
  if (a == b)
    return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Brute-force ordered neighbors of i: sort every other sample by
// (distance, index).
inline std::vector<std::pair<std::size_t, double>>
brute_knn(const renyi::Dataset& data, std::size_t i, std::size_t m)
{
  std::vector<std::pair<double, std::size_t>> all;
  const auto xi = data.point(i);
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (j == i)
      continue;
    const auto xj = data.point(j);
    double s = 0.0;
    for (std::size_t a = 0; a < xi.size(); ++a)
      s += (xj[a] - xi[a]) * (xj[a] - xi[a]);
    all.emplace_back(s, j);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t t = 0; t < m; ++t)
    out.emplace_back(all[t].second, std::sqrt(all[t].first));
  return out;
}

// P(sqrt(n) D > x) for the one-sample Kolmogorov-Smirnov statistic, using
// Stephens' finite-n correction and the Kolmogorov series.
inline double
ks_pvalue(double D, std::size_t n)
{
  const double sn = std::sqrt(static_cast<double>(n));
  const double x = D * (sn + 0.12 + 0.11 / sn);
  if (x < 0.2)
    return 1.0;
  double p = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    p += (j % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18)
      break;
  }
  return std::clamp(p, 0.0, 1.0);
}

template<typename Cdf>
double
ks_statistic(std::vector<double> xs, Cdf cdf)
{
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double D = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    D = std::max(D, std::max(F - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - F));
  }
  return D;
}

inline double
mean_of(const std::vector<double>& v)
{
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double
variance_of(const std::vector<double>& v)
{
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v)
    s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

} // namespace testing

#include "renyi/bias_mc.hpp"

namespace testing {

// The committed default table.
inline const renyi::BiasTable&
default_table()
{
  static const renyi::BiasTable t = renyi::load_table(RENYI_DEFAULT_BIAS_TABLE);
  return t;
}

// A cheap but genuine bias entry for identity tests, where the constant
// cancels or only its key matters.
inline renyi::BiasEntry
quick_kde_bias(std::size_t k, std::size_t d, double alpha,
               renyi::KernelFamily f = renyi::KernelFamily::gaussian,
               double scale = 1.0)
{
  renyi::McOptions opt;
  opt.trials = 400;
  opt.m_trunc = 100;
  opt.seed = 77;
  return renyi::bias_kde(k, d, alpha, renyi::KernelSpec(f, d, scale), opt);
}

inline renyi::BiasEntry
quick_llde_bias(std::size_t k, std::size_t d, double alpha)
{
  renyi::McOptions opt;
  opt.trials = 200;
  opt.m_trunc = 100;
  opt.seed = 78;
  return renyi::bias_llde(k, d, alpha, opt);
}

} // namespace testing
