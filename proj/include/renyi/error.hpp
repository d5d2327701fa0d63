#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace renyi {

enum class ErrorCode
{
  dimension_mismatch,
  empty_dataset,
  non_finite_input,
  duplicate_points,
  index_out_of_range,
  m_too_large,
  invalid_argument,
  non_finite,
  singular_excess,
  singular_sigma,
  io_error,
  format_version_mismatch,
  corrupt_entry,
  bias_mismatch,
  missing_bias_entry,
  alpha_one,
  non_positive_j,
  invalid_k,
  zero_bandwidth,
  bad_correlation,
  unsupported,
  non_convergence
};

std::string_view to_string(ErrorCode code);

//! Single exception type for the library; callers branch on code().
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace renyi
