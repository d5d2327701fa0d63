#pragma once

#include "renyi/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace renyi {

struct Neighbor
{
  std::size_t index;
  double distance;

  bool operator==(const Neighbor&) const = default;
};

//! The m nearest other samples to `center`, ordered by (distance, index).
struct NeighborList
{
  std::size_t center;
  std::vector<Neighbor> entries;

  std::size_t size() const { return entries.size(); }
};

//! Exact Euclidean k-NN over a fixed sample set.
//!
//! Backed by a kd-tree. Ties in distance are broken by the smaller sample
//! index, so results are fully deterministic. The index owns a copy of the
//! dataset and is immutable after construction; concurrent queries are safe.
class NeighborIndex
{
public:
  //! Throws DuplicatePoints(i, j) if two samples coincide exactly.
  explicit NeighborIndex(Dataset data);

  const Dataset& data() const { return data_; }
  std::size_t size() const { return data_.size(); }
  std::size_t dim() const { return data_.dim(); }

  //! Requires i < n and 1 <= m <= n - 1.
  NeighborList knn(std::size_t i, std::size_t m) const;

  //! Distance from sample i to its k-th nearest neighbor.
  double rho(std::size_t i, std::size_t k) const;

private:
  struct Node
  {
    // leaf: [begin, end) into perm_; inner: split on `axis` at `value`
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t axis = 0;
    double value = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void check_query(std::size_t i, std::size_t m) const;

  Dataset data_;
  std::vector<std::uint32_t> perm_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;

  friend class KnnSearch;
};

//! m = max(k, ceil(ln n)), capped at n - 1.
std::size_t truncation_size(std::size_t n, std::size_t k);

} // namespace renyi
