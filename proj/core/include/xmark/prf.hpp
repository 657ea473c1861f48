#pragma once

#include <cstdint>

#include "xmark/rng.hpp"

namespace xmark {

/// Seed derived from a two-token context and one secret key. Equal inputs
/// give equal seeds; encoder and decoder share this path so their
/// vocabulary permutations agree exactly.
struct HashSeed {
  std::uint64_t value = 0;
};

// Keyed two-token context hash: two rounds of the SplitMix64 finalizer with
// the token ids folded in via odd multiplicative constants. Not a
// cryptographic PRF; collision resistance at the "watermark key" level is
// all that is needed here.
inline HashSeed prf_hash(std::uint32_t x_prev2, std::uint32_t x_prev1,
                         std::uint64_t key) noexcept {
  constexpr std::uint64_t c1 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t c2 = 0xBF58476D1CE4E5B9ULL;
  std::uint64_t z = mix64(key ^ ((static_cast<std::uint64_t>(x_prev2) + 1) * c1));
  z = mix64(z ^ ((static_cast<std::uint64_t>(x_prev1) + 1) * c2));
  return HashSeed{z};
}

}  // namespace xmark
