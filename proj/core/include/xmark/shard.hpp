#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xmark/params.hpp"
#include "xmark/prf.hpp"

namespace xmark {

/// Shard layout of the vocabulary under one keyed permutation: shard_of maps
/// token id -> shard index in [0, 2^d); shard_sizes differ by at most one,
/// larger shards first.
struct ShardAssignment {
  std::vector<std::uint32_t> shard_of;
  std::vector<std::uint32_t> shard_sizes;
};

// Fisher-Yates shuffle of [0, V) driven by SplitMix64(seed), cut into 2^d
// contiguous shards. The first (V mod 2^d) shards take the extra token.
// Throws when 2^d > V. The _into variant reuses the output's buffers.
ShardAssignment permute_and_partition(HashSeed seed, std::uint32_t vocab_size,
                                      std::uint32_t block_bits);
void permute_and_partition_into(HashSeed seed, std::uint32_t vocab_size,
                                std::uint32_t block_bits, ShardAssignment& out,
                                std::vector<std::uint32_t>& perm_scratch);

// One assignment per hash key for a fixed two-token context.
std::vector<ShardAssignment> build_assignments(std::uint32_t x_prev2,
                                               std::uint32_t x_prev1,
                                               const WatermarkParams& params);

// Evergreen membership: v is in E iff it avoids shard p under every key.
inline bool in_evergreen(std::span<const ShardAssignment> assignments,
                         std::uint32_t p, std::uint32_t token) {
  for (const auto& a : assignments) {
    if (a.shard_of[token] == p) return false;
  }
  return true;
}

// Materialized evergreen list, ordered by token id. Throws when p >= 2^d.
std::vector<std::uint32_t> evergreen_list(
    std::span<const ShardAssignment> assignments, std::uint32_t p);

/// Monte-Carlo estimate of the expected evergreen ratio E[|E|]/V over random
/// key tuples, alongside the analytic value (1 - 2^-d)^k.
struct EvergreenRatioEstimate {
  double empirical_mean = 0.0;
  double std_error = 0.0;
  double analytic = 0.0;
  std::uint32_t trials = 0;
};

EvergreenRatioEstimate estimate_evergreen_ratio(std::uint32_t vocab_size,
                                                std::uint32_t block_bits,
                                                std::uint32_t num_keys,
                                                std::uint32_t trials,
                                                std::uint64_t seed);

}  // namespace xmark
