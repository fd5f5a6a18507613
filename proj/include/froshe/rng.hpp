#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace froshe {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent named streams. Each consumer of randomness hashes its own tag
/// with the run seed, so adding draws in one stream never shifts another.
enum class Stream : std::uint64_t {
  World = 0x776f726c64ULL,
  Swarm = 0x737761726dULL,
  Strategy = 0x7374726174ULL,
  Sensor = 0x73656e736fULL,
};

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream) noexcept {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)));
}

}  // namespace froshe
