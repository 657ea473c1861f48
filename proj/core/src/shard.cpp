#include "xmark/shard.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace xmark {

void permute_and_partition_into(HashSeed seed, std::uint32_t vocab_size,
                                std::uint32_t block_bits, ShardAssignment& out,
                                std::vector<std::uint32_t>& perm_scratch) {
  if (block_bits >= 31 || (1u << block_bits) > vocab_size) {
    throw std::invalid_argument("vocabulary too small for 2^block_bits shards");
  }
  const std::uint32_t num_shards = 1u << block_bits;

  auto& perm = perm_scratch;
  perm.resize(vocab_size);
  std::iota(perm.begin(), perm.end(), 0u);

  SplitMix64 rng(seed.value);
  for (std::uint32_t n = vocab_size - 1; n >= 1; --n) {
    const auto j = static_cast<std::uint32_t>(rng.next() % (n + 1));
    std::swap(perm[n], perm[j]);
  }

  // Near-equal contiguous cut; the first (V mod 2^d) shards take one extra.
  const std::uint32_t base = vocab_size / num_shards;
  const std::uint32_t remainder = vocab_size % num_shards;
  out.shard_sizes.resize(num_shards);
  out.shard_of.resize(vocab_size);
  std::uint32_t pos = 0;
  for (std::uint32_t s = 0; s < num_shards; ++s) {
    const std::uint32_t size = base + (s < remainder ? 1 : 0);
    out.shard_sizes[s] = size;
    for (std::uint32_t c = 0; c < size; ++c) {
      out.shard_of[perm[pos++]] = s;
    }
  }
}

ShardAssignment permute_and_partition(HashSeed seed, std::uint32_t vocab_size,
                                      std::uint32_t block_bits) {
  ShardAssignment out;
  std::vector<std::uint32_t> scratch;
  permute_and_partition_into(seed, vocab_size, block_bits, out, scratch);
  return out;
}

std::vector<ShardAssignment> build_assignments(std::uint32_t x_prev2,
                                               std::uint32_t x_prev1,
                                               const WatermarkParams& params) {
  std::vector<ShardAssignment> assignments(params.num_keys);
  std::vector<std::uint32_t> scratch;
  for (std::uint32_t j = 0; j < params.num_keys; ++j) {
    permute_and_partition_into(prf_hash(x_prev2, x_prev1, params.hash_keys[j]),
                               params.vocab_size, params.block_bits,
                               assignments[j], scratch);
  }
  return assignments;
}

std::vector<std::uint32_t> evergreen_list(
    std::span<const ShardAssignment> assignments, std::uint32_t p) {
  if (assignments.empty()) {
    throw std::invalid_argument("evergreen_list needs at least one assignment");
  }
  const auto num_shards = assignments.front().shard_sizes.size();
  if (p >= num_shards) {
    throw std::domain_error("shard index out of range");
  }
  const auto vocab_size = assignments.front().shard_of.size();
  std::vector<std::uint32_t> members;
  for (std::uint32_t v = 0; v < vocab_size; ++v) {
    if (in_evergreen(assignments, p, v)) members.push_back(v);
  }
  return members;
}

EvergreenRatioEstimate estimate_evergreen_ratio(std::uint32_t vocab_size,
                                                std::uint32_t block_bits,
                                                std::uint32_t num_keys,
                                                std::uint32_t trials,
                                                std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  const std::uint32_t num_shards = 1u << block_bits;
  SplitMix64 master(seed);

  std::vector<ShardAssignment> assignments(num_keys);
  std::vector<std::uint32_t> scratch;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    for (std::uint32_t j = 0; j < num_keys; ++j) {
      permute_and_partition_into(prf_hash(0, 1, master.next()), vocab_size,
                                 block_bits, assignments[j], scratch);
    }
    const auto p = static_cast<std::uint32_t>(master.next() % num_shards);
    std::uint32_t count = 0;
    for (std::uint32_t v = 0; v < vocab_size; ++v) {
      count += in_evergreen(assignments, p, v) ? 1 : 0;
    }
    const double ratio = static_cast<double>(count) / vocab_size;
    sum += ratio;
    sum_sq += ratio * ratio;
  }

  EvergreenRatioEstimate est;
  est.trials = trials;
  est.empirical_mean = sum / trials;
  const double var =
      trials > 1 ? (sum_sq - sum * sum / trials) / (trials - 1) : 0.0;
  est.std_error = var > 0.0 ? std::sqrt(var / trials) : 0.0;
  est.analytic = std::pow(1.0 - std::pow(2.0, -static_cast<double>(block_bits)),
                          static_cast<double>(num_keys));
  return est;
}

}  // namespace xmark
