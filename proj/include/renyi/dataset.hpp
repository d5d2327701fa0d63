#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace renyi {

using PointMatrix =
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

//! n samples in R^d, stored row-major so each point is contiguous.
//!
//! Construction validates the invariants every estimator relies on:
//! n >= 2, d >= 1, all coordinates finite. Exact duplicates are rejected
//! later, when the neighbor index is built.
class Dataset
{
public:
  explicit Dataset(PointMatrix points, std::string provenance = {});

  //! Builds from a flat row-major buffer of n*d values.
  static Dataset from_rows(std::span<const double> values,
                           std::size_t d,
                           std::string provenance = {});

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }

  std::span<const double> point(std::size_t i) const
  {
    return { points_.data() + i * dim(), dim() };
  }

  const PointMatrix& points() const { return points_; }
  const std::string& provenance() const { return provenance_; }

  //! Copy with every coordinate multiplied by s.
  Dataset scaled(double s) const;

private:
  PointMatrix points_;
  std::string provenance_;
};

//! Reads one sample per row, d numeric columns. A first row that does not
//! parse as numbers is treated as a header.
Dataset read_csv(const std::filesystem::path& path);

void write_csv(const Dataset& data,
               const std::filesystem::path& path,
               bool with_header = true);

} // namespace renyi
