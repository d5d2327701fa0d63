#include "renyi/dataset.hpp"
#include "renyi/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace renyi {

Dataset::Dataset(PointMatrix points, std::string provenance)
  : points_(std::move(points))
  , provenance_(std::move(provenance))
{
  if (points_.rows() == 0)
    throw Error(ErrorCode::empty_dataset, "dataset has no samples");
  if (points_.cols() == 0)
    throw Error(ErrorCode::dimension_mismatch, "dataset has zero dimension");
  if (points_.rows() < 2)
    throw Error(ErrorCode::empty_dataset,
                "dataset needs at least 2 samples, got 1");
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    for (Eigen::Index j = 0; j < points_.cols(); ++j) {
      if (!std::isfinite(points_(i, j))) {
        throw Error(ErrorCode::non_finite_input,
                    "non-finite coordinate at sample " + std::to_string(i) +
                      ", column " + std::to_string(j));
      }
    }
  }
}

Dataset
Dataset::from_rows(std::span<const double> values,
                   std::size_t d,
                   std::string provenance)
{
  if (d == 0)
    throw Error(ErrorCode::dimension_mismatch, "dimension must be positive");
  if (values.size() % d != 0) {
    throw Error(ErrorCode::dimension_mismatch,
                "buffer of " + std::to_string(values.size()) +
                  " values is not a multiple of d=" + std::to_string(d));
  }
  const auto n = static_cast<Eigen::Index>(values.size() / d);
  PointMatrix pts(n, static_cast<Eigen::Index>(d));
  std::copy(values.begin(), values.end(), pts.data());
  return Dataset(std::move(pts), std::move(provenance));
}

Dataset
Dataset::scaled(double s) const
{
  return Dataset(points_ * s, provenance_);
}

namespace {

std::vector<std::string_view>
split_fields(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    auto field = line.substr(start, pos == std::string_view::npos
                                      ? std::string_view::npos
                                      : pos - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
      field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                              field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

bool
parse_double(std::string_view s, double& out)
{
  if (s.empty())
    return false;
  if (s.front() == '+')
    s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

Dataset
read_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io_error, "cannot open " + path.string());

  std::vector<double> values;
  std::size_t d = 0;
  std::size_t line_no = 0;
  bool seen_data = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.front() == '#')
      continue;
    auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size(); ++c)
      numeric = numeric && parse_double(fields[c], row[c]);
    if (!numeric) {
      if (!seen_data) {
        d = fields.size(); // header fixes the column count
        seen_data = true;
        continue;
      }
      throw Error(ErrorCode::corrupt_entry,
                  path.string() + ":" + std::to_string(line_no) +
                    ": non-numeric field");
    }
    if (d == 0)
      d = row.size();
    seen_data = true;
    if (row.size() != d) {
      throw Error(ErrorCode::dimension_mismatch,
                  path.string() + ":" + std::to_string(line_no) +
                    ": expected " + std::to_string(d) + " columns, got " +
                    std::to_string(row.size()));
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  if (values.empty())
    throw Error(ErrorCode::empty_dataset, path.string() + " has no samples");
  return Dataset::from_rows(values, d, path.string());
}

void
write_csv(const Dataset& data,
          const std::filesystem::path& path,
          bool with_header)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out.precision(17);
  if (with_header) {
    for (std::size_t c = 0; c < data.dim(); ++c)
      out << (c ? "," : "") << "x" << (c + 1);
    out << '\n';
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto p = data.point(i);
    for (std::size_t c = 0; c < p.size(); ++c)
      out << (c ? "," : "") << p[c];
    out << '\n';
  }
  if (!out)
    throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

} // namespace renyi
