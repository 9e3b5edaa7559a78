#pragma once

#include <cstdint>
#include <random>

namespace besovnet {

/// Counter-based stream: every (seed, stream, index) triple gets its own
/// generator, so results never depend on evaluation order.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Stream ids.
inline constexpr std::uint64_t kStreamRotation = 1;
inline constexpr std::uint64_t kStreamSample = 2;
inline constexpr std::uint64_t kStreamSplit = 3;
inline constexpr std::uint64_t kStreamInit = 4;
inline constexpr std::uint64_t kStreamBatch = 5;
inline constexpr std::uint64_t kStreamProbe = 6;

}  // namespace besovnet
