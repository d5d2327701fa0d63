#include "renyi/llde.hpp"
#include "resubstitution.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace renyi {

LocalMoments
make_local_moments(double S0,
                   Eigen::VectorXd S1,
                   Eigen::MatrixXd S2,
                   bool regularize)
{
  if (!(S0 > 0.0) || !std::isfinite(S0))
    throw Error(ErrorCode::non_finite, "local weight sum S0 must be positive");
  const auto d = S1.size();
  LocalMoments m;
  m.S0 = S0;
  m.mu = S1 / S0;
  m.sigma = S2 / S0 - m.mu * m.mu.transpose();
  m.sigma = 0.5 * (m.sigma + m.sigma.transpose()).eval();
  m.S1 = std::move(S1);
  m.S2 = std::move(S2);

  const double tau =
    1e-8 * std::max(1.0, m.sigma.trace() / static_cast<double>(d));
  double min_eig;
  if (d == 1) {
    min_eig = m.sigma(0, 0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m.sigma, Eigen::EigenvaluesOnly);
    min_eig = es.eigenvalues()(0);
  }
  if (!std::isfinite(min_eig))
    throw Error(ErrorCode::non_finite, "local covariance is not finite");
  if (min_eig < tau) {
    if (!regularize) {
      throw Error(ErrorCode::singular_sigma,
                  "local covariance is numerically singular (smallest "
                  "eigenvalue " +
                    std::to_string(min_eig) + ")");
    }
    m.sigma.diagonal().array() += tau;
    m.regularized = true;
  }
  return m;
}

double
local_gaussian_mass(const LocalMoments& m)
{
  const auto d = m.mu.size();
  Eigen::LLT<Eigen::MatrixXd> llt(m.sigma);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::singular_sigma,
                "local covariance is not positive definite");
  const Eigen::MatrixXd& L = llt.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index a = 0; a < d; ++a)
    log_det += 2.0 * std::log(L(a, a));
  const Eigen::VectorXd y = llt.matrixL().solve(m.mu);
  const double q = y.squaredNorm();
  const double log_norm =
    0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
  return m.S0 * std::exp(-0.5 * q - 0.5 * log_det - log_norm);
}

namespace {

struct Bandwidth
{
  LocalMoments moments;
  double rho;
};

Bandwidth
moments_with_rho(const NeighborIndex& index,
                 std::size_t i,
                 std::size_t k,
                 bool regularize)
{
  if (k < 1)
    throw Error(ErrorCode::invalid_k, "k must be at least 1");
  const std::size_t m = truncation_size(index.size(), k);
  const auto nbrs = index.knn(i, m);
  const double rho = nbrs.entries[k - 1].distance;
  const auto d = static_cast<Eigen::Index>(index.dim());
  const auto xi = index.data().point(i);

  double S0 = 0.0;
  Eigen::VectorXd S1 = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd S2 = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd u(d);
  for (const auto& nb : nbrs.entries) {
    const auto xj = index.data().point(nb.index);
    for (Eigen::Index a = 0; a < d; ++a)
      u(a) = (xj[static_cast<std::size_t>(a)] - xi[static_cast<std::size_t>(a)]) / rho;
    const double w = std::exp(-0.5 * u.squaredNorm());
    S0 += w;
    S1 += w * u;
    S2.noalias() += w * (u * u.transpose());
  }
  return { make_local_moments(S0, std::move(S1), std::move(S2), regularize),
           rho };
}

} // namespace

LocalMoments
local_moments(const NeighborIndex& index,
              std::size_t i,
              std::size_t k,
              bool regularize)
{
  return moments_with_rho(index, i, k, regularize).moments;
}

double
llde_density_at(const NeighborIndex& index,
                std::size_t i,
                std::size_t k,
                bool regularize)
{
  const auto b = moments_with_rho(index, i, k, regularize);
  const double nrd = static_cast<double>(index.size()) *
                     std::pow(b.rho, static_cast<double>(index.dim()));
  return local_gaussian_mass(b.moments) / nrd;
}

EstimateResult
estimate_J_klnn(const NeighborIndex& index,
                const EstimatorConfig& config,
                const BiasEntry& bias)
{
  detail::check_config(config);
  const std::size_t d = index.dim();
  detail::check_bias(bias,
                     { config.k, d, config.alpha, EstimatorKind::llde,
                       KernelFamily::gaussian });
  const double cd = unit_ball_volume(d);
  const double n = static_cast<double>(index.size());

  return detail::resubstitute(
    index, config, bias, "klnn", [&](std::size_t i) {
      const auto b = moments_with_rho(index, i, config.k, config.regularize);
      const double scale = cd * n * std::pow(b.rho, static_cast<double>(d));
      return detail::LocalValue{ cd * local_gaussian_mass(b.moments),
                                 scale,
                                 b.moments.regularized };
    });
}

EstimateResult
estimate_J_klnn(const Dataset& data,
                const EstimatorConfig& config,
                const BiasEntry& bias)
{
  return estimate_J_klnn(NeighborIndex(data), config, bias);
}

EstimateResult
estimate_H_klnn(const NeighborIndex& index,
                const EstimatorConfig& config,
                const BiasEntry& bias)
{
  detail::check_alpha_not_one(config.alpha);
  return detail::renyi_from_j(estimate_J_klnn(index, config, bias));
}

EstimateResult
estimate_H_klnn(const Dataset& data,
                const EstimatorConfig& config,
                const BiasEntry& bias)
{
  return estimate_H_klnn(NeighborIndex(data), config, bias);
}

} // namespace renyi
