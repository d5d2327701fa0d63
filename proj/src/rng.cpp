#include "renyi/rng.hpp"

namespace renyi {

std::mt19937_64
make_stream(std::uint64_t seed, std::uint64_t stream, StreamPurpose purpose)
{
  std::seed_seq seq{ static_cast<std::uint32_t>(seed),
                     static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(stream),
                     static_cast<std::uint32_t>(stream >> 32),
                     static_cast<std::uint32_t>(purpose) };
  return std::mt19937_64(seq);
}

} // namespace renyi
