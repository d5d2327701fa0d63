#pragma once

#include <cstdint>
#include <random>

namespace renyi {

//! Independent random substreams keyed by (seed, stream, purpose).
//!
//! Every Monte Carlo trial and every synthetic dataset draws from its own
//! engine, so results do not depend on how trials are spread over workers.
//! The purpose tag separates draws that must stay independent of each
//! other within one trial (e.g. radii vs. directions).
enum class StreamPurpose : std::uint32_t
{
  radii = 1,
  directions = 2,
  gaussian = 3,
  component = 4,
  generic = 5
};

std::mt19937_64 make_stream(std::uint64_t seed,
                            std::uint64_t stream,
                            StreamPurpose purpose);

} // namespace renyi
