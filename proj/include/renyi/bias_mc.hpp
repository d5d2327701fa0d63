#pragma once

#include "renyi/kernels.hpp"

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace renyi {

//! One draw from the limiting order-statistics model: R_j are partial sums
//! of standard exponentials, xi_j uniform unit vectors. The j-th nearest
//! neighbor sits at xi_j * R_j^{1/d} in standardized coordinates.
struct OrderStatSample
{
  std::vector<double> partial_sums;
  std::vector<double> directions; // m x d, row-major
  std::size_t m = 0;
  std::size_t d = 0;

  std::span<const double> direction(std::size_t j) const
  {
    return { directions.data() + j * d, d };
  }
};

//! Deterministic in (seed, trial). Radii and directions use separate
//! substreams, so the radii alone can be redrawn without the directions.
OrderStatSample sample_order_stats(std::uint64_t seed,
                                   std::uint64_t trial,
                                   std::size_t m,
                                   std::size_t d);

//! Same radii as sample_order_stats(seed, trial, m, d).partial_sums.
std::vector<double> sample_partial_sums(std::uint64_t seed,
                                        std::uint64_t trial,
                                        std::size_t m);

//! sum_j K(xi_j (R_j / R_k)^{1/d}), k is 1-based.
double s_tilde_kde(const OrderStatSample& s, std::size_t k,
                   const KernelSpec& kernel);

struct LldeSums
{
  double S0 = 0.0;
  Eigen::VectorXd S1;
  Eigen::MatrixXd S2;
};

//! S_gamma = sum_j xi_j^{(gamma)} (R_j/R_k)^{gamma/d} exp(-(R_j/R_k)^{2/d}/2)
//! for gamma = 0, 1, 2.
LldeSums s_tilde_llde(const OrderStatSample& s, std::size_t k);

enum class EstimatorKind
{
  kde,
  llde
};

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);

struct BiasKey
{
  std::size_t k = 0;
  std::size_t d = 0;
  double alpha = 0.0;
  EstimatorKind kind = EstimatorKind::kde;
  // Always gaussian for LLDE entries.
  KernelFamily kernel = KernelFamily::gaussian;

  auto tie() const { return std::tie(k, d, alpha, kind, kernel); }
  bool operator<(const BiasKey& o) const { return tie() < o.tie(); }
  bool operator==(const BiasKey& o) const { return tie() == o.tie(); }
};

std::string describe(const BiasKey& key);

struct BiasEntry
{
  BiasKey key;
  double bias = 1.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::size_t m_trunc = 0;
  std::uint64_t seed = 0;

  bool operator==(const BiasEntry&) const = default;
};

struct McOptions
{
  std::size_t trials = 1000000;
  std::size_t m_trunc = 5000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct McDiagnostics
{
  std::size_t regularized_trials = 0;
};

//! B = E[(c_d S~ / R_k)^{alpha-1}] for a KDE with kernel `kernel`.
BiasEntry bias_kde(std::size_t k,
                   std::size_t d,
                   double alpha,
                   const KernelSpec& kernel,
                   const McOptions& opt);

//! B = E[(c_d S~0 / (R_k (2 pi)^{d/2} |Sigma|^{1/2}) exp(-mu' Sigma^-1 mu/2))^{alpha-1}].
//! Throws SingularExcess if more than 1% of trials needed regularization.
BiasEntry bias_llde(std::size_t k,
                    std::size_t d,
                    double alpha,
                    const McOptions& opt,
                    McDiagnostics* diag = nullptr);

class BiasTable
{
public:
  static constexpr int format_version = 1;

  //! Replaces any entry with the same key.
  void insert(const BiasEntry& entry);
  //! nullptr if absent.
  const BiasEntry* find(const BiasKey& key) const;
  //! Throws MissingBiasEntry naming the key.
  const BiasEntry& at(const BiasKey& key) const;

  std::size_t size() const { return entries_.size(); }
  std::vector<BiasEntry> entries() const;

  bool operator==(const BiasTable&) const = default;

private:
  std::map<BiasKey, BiasEntry> entries_;
};

void store_table(const BiasTable& table, const std::filesystem::path& path);
BiasTable load_table(const std::filesystem::path& path);

} // namespace renyi
