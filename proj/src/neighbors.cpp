#include "renyi/neighbors.hpp"
#include "renyi/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace renyi {

namespace {

constexpr std::uint32_t leaf_size = 12;

// (squared distance, index) ordered lexicographically; this order is the
// tie-breaking rule for every neighbor query.
struct Candidate
{
  double d2;
  std::uint32_t index;

  bool operator<(const Candidate& o) const
  {
    return d2 < o.d2 || (d2 == o.d2 && index < o.index);
  }
};

} // namespace

class KnnSearch
{
public:
  KnnSearch(const NeighborIndex& idx, std::size_t center, std::size_t m)
    : idx_(idx)
    , query_(idx.data_.point(center))
    , center_(static_cast<std::uint32_t>(center))
    , m_(m)
  {
    heap_.reserve(m + 1);
  }

  std::vector<Neighbor> run()
  {
    visit(idx_.root_);
    std::sort_heap(heap_.begin(), heap_.end());
    std::vector<Neighbor> out;
    out.reserve(heap_.size());
    for (const auto& c : heap_)
      out.push_back({ c.index, std::sqrt(c.d2) });
    return out;
  }

private:
  void offer(const Candidate& c)
  {
    if (heap_.size() < m_) {
      heap_.push_back(c);
      std::push_heap(heap_.begin(), heap_.end());
    } else if (c < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = c;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  void visit(std::int32_t node_id)
  {
    const auto& node = idx_.nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
      const std::size_t d = query_.size();
      for (std::uint32_t p = node.begin; p < node.end; ++p) {
        const std::uint32_t j = idx_.perm_[p];
        if (j == center_)
          continue;
        const auto x = idx_.data_.point(j);
        double d2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
          const double diff = x[a] - query_[a];
          d2 += diff * diff;
        }
        offer({ d2, j });
      }
      return;
    }
    const double diff = query_[node.axis] - node.value;
    const auto near = diff <= 0.0 ? node.left : node.right;
    const auto far = diff <= 0.0 ? node.right : node.left;
    visit(near);
    // equality still descends: an equidistant point may win on index
    if (heap_.size() < m_ || diff * diff <= heap_.front().d2)
      visit(far);
  }

  const NeighborIndex& idx_;
  std::span<const double> query_;
  std::uint32_t center_;
  std::size_t m_;
  std::vector<Candidate> heap_;
};

NeighborIndex::NeighborIndex(Dataset data)
  : data_(std::move(data))
{
  const std::size_t n = data_.size();
  const std::size_t d = data_.dim();
  if (n > std::numeric_limits<std::uint32_t>::max() / 2)
    throw Error(ErrorCode::invalid_argument, "dataset too large for index");

  // exact duplicates: sort lexicographically, compare neighbors in order
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  auto lex_less = [&](std::uint32_t a, std::uint32_t b) {
    const auto pa = data_.point(a);
    const auto pb = data_.point(b);
    for (std::size_t c = 0; c < d; ++c) {
      if (pa[c] != pb[c])
        return pa[c] < pb[c];
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), lex_less);
  std::size_t dup_i = n, dup_j = n;
  for (std::size_t t = 1; t < n; ++t) {
    const auto pa = data_.point(order[t - 1]);
    const auto pb = data_.point(order[t]);
    if (std::equal(pa.begin(), pa.end(), pb.begin())) {
      const std::size_t i = order[t - 1], j = order[t];
      // within an equal run indices ascend; keep the smallest pair overall
      if (i < dup_i || (i == dup_i && j < dup_j)) {
        dup_i = i;
        dup_j = j;
      }
    }
  }
  if (dup_i < n) {
    throw Error(ErrorCode::duplicate_points,
                "DuplicatePoints(" + std::to_string(dup_i) + ", " +
                  std::to_string(dup_j) +
                  "): samples coincide exactly; deduplicate the input or "
                  "add a small jitter before estimating");
  }

  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0u);
  nodes_.reserve(2 * (n / leaf_size + 1));
  root_ = build(0, static_cast<std::uint32_t>(n));
}

std::int32_t
NeighborIndex::build(std::uint32_t begin, std::uint32_t end)
{
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({ begin, end });
  if (end - begin <= leaf_size)
    return id;

  const std::size_t d = dim();
  std::uint32_t axis = 0;
  double best_spread = -1.0;
  for (std::size_t a = 0; a < d; ++a) {
    double lo = data_.point(perm_[begin])[a];
    double hi = lo;
    for (std::uint32_t p = begin + 1; p < end; ++p) {
      const double v = data_.point(perm_[p])[a];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      axis = static_cast<std::uint32_t>(a);
    }
  }

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + begin,
                   perm_.begin() + mid,
                   perm_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return data_.point(a)[axis] < data_.point(b)[axis];
                   });
  const double value = data_.point(perm_[mid])[axis];

  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  auto& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.axis = axis;
  node.value = value;
  return id;
}

void
NeighborIndex::check_query(std::size_t i, std::size_t m) const
{
  if (i >= size()) {
    throw Error(ErrorCode::index_out_of_range,
                "sample index " + std::to_string(i) + " out of range [0, " +
                  std::to_string(size()) + ")");
  }
  if (m == 0) {
    throw Error(ErrorCode::invalid_argument,
                "neighbor count must be at least 1");
  }
  if (m > size() - 1) {
    throw Error(ErrorCode::m_too_large,
                "requested " + std::to_string(m) + " neighbors but only " +
                  std::to_string(size() - 1) + " other samples exist");
  }
}

NeighborList
NeighborIndex::knn(std::size_t i, std::size_t m) const
{
  check_query(i, m);
  KnnSearch search(*this, i, m);
  return { i, search.run() };
}

double
NeighborIndex::rho(std::size_t i, std::size_t k) const
{
  return knn(i, k).entries.back().distance;
}

std::size_t
truncation_size(std::size_t n, std::size_t k)
{
  if (n < 2)
    throw Error(ErrorCode::invalid_argument, "need at least 2 samples");
  if (k < 1)
    throw Error(ErrorCode::invalid_k, "k must be at least 1");
  if (k > n - 1) {
    throw Error(ErrorCode::m_too_large,
                "k=" + std::to_string(k) + " exceeds n-1=" +
                  std::to_string(n - 1));
  }
  const auto log_m =
    static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n))));
  return std::min(std::max(k, log_m), n - 1);
}

} // namespace renyi
