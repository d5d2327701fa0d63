#include "renyi/error.hpp"

namespace renyi {

std::string_view
to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::empty_dataset: return "EmptyDataset";
    case ErrorCode::non_finite_input: return "NonFiniteInput";
    case ErrorCode::duplicate_points: return "DuplicatePoints";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::m_too_large: return "MTooLarge";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_finite: return "NonFinite";
    case ErrorCode::singular_excess: return "SingularExcess";
    case ErrorCode::singular_sigma: return "SingularSigma";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::format_version_mismatch: return "FormatVersionMismatch";
    case ErrorCode::corrupt_entry: return "CorruptEntry";
    case ErrorCode::bias_mismatch: return "BiasMismatch";
    case ErrorCode::missing_bias_entry: return "MissingBiasEntry";
    case ErrorCode::alpha_one: return "AlphaOne";
    case ErrorCode::non_positive_j: return "NonPositiveJ";
    case ErrorCode::invalid_k: return "InvalidK";
    case ErrorCode::zero_bandwidth: return "ZeroBandwidth";
    case ErrorCode::bad_correlation: return "BadCorrelation";
    case ErrorCode::unsupported: return "Unsupported";
    case ErrorCode::non_convergence: return "NonConvergence";
  }
  return "Unknown";
}

} // namespace renyi
