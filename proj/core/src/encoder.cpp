#include "xmark/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "xmark/codec.hpp"
#include "xmark/shard.hpp"

namespace xmark {

namespace {

// Inverse-CDF draw over softmax(logits) restricted to `order` (token ids in
// the order the CDF is walked). Consumes exactly one uniform.
std::uint32_t draw_from_softmax(std::span<const double> logits,
                                std::span<const std::uint32_t> order,
                                SplitMix64& rng, double mass_cutoff) {
  double max_logit = logits[order[0]];
  for (auto v : order) max_logit = std::max(max_logit, logits[v]);

  thread_local std::vector<double> weights;
  weights.resize(order.size());
  double total = 0.0;
  std::size_t support = order.size();
  for (std::size_t i = 0; i < order.size(); ++i) {
    weights[i] = std::exp(logits[order[i]] - max_logit);
    total += weights[i];
  }
  if (mass_cutoff < 1.0) {
    // Nucleus truncation: keep the shortest prefix of `order` reaching the
    // cutoff mass, then renormalize over it.
    double cum = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      cum += weights[i];
      if (cum >= mass_cutoff * total) {
        support = i + 1;
        total = cum;
        break;
      }
    }
  }

  const double target = rng.next_unit() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < support; ++i) {
    cum += weights[i];
    if (cum >= target) return order[i];
  }
  return order[support - 1];
}

std::uint32_t sample_impl(std::span<const double> logits, SplitMix64& rng,
                          std::optional<double> top_p) {
  thread_local std::vector<std::uint32_t> order;
  order.resize(logits.size());
  std::iota(order.begin(), order.end(), 0u);
  if (top_p && *top_p < 1.0) {
    // Descending probability, ties toward the smaller token id.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return logits[a] > logits[b];
                     });
    return draw_from_softmax(logits, order, rng, *top_p);
  }
  return draw_from_softmax(logits, order, rng, 1.0);
}

}  // namespace

std::vector<double> perturb_logits(std::span<const double> logits,
                                   std::span<const std::uint8_t> green,
                                   double delta) {
  if (logits.size() != green.size()) {
    throw std::invalid_argument("green mask size must match logits");
  }
  if (delta < 0.0) throw std::invalid_argument("bias must be non-negative");
  std::vector<double> out(logits.begin(), logits.end());
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (green[v]) out[v] += delta;
  }
  return out;
}

std::uint32_t sample_token(std::span<const double> logits, SplitMix64& rng,
                           std::optional<double> top_p) {
  if (logits.empty()) throw std::invalid_argument("cannot sample from empty logits");
  if (top_p && !(*top_p > 0.0 && *top_p <= 1.0)) {
    throw std::invalid_argument("top_p must lie in (0, 1]");
  }
  return sample_impl(logits, rng, top_p);
}

EncodeResult encode(const Message& message, const WatermarkParams& params,
                    const LogitSource& source, std::uint32_t num_steps,
                    std::array<std::uint32_t, 2> prompt_tail,
                    std::uint64_t sampler_seed, std::optional<double> top_p) {
  params.validate();
  if (num_steps == 0) throw std::invalid_argument("num_steps must be positive");
  if (source.vocab_size() != params.vocab_size) {
    throw std::invalid_argument("logit source vocabulary does not match params");
  }

  const auto blocks = divide_message(message, params);
  const std::uint32_t vocab = params.vocab_size;

  EncodeResult result;
  result.tokens.bootstrap = prompt_tail;
  result.tokens.tokens.reserve(num_steps);
  result.steps = num_steps;

  SplitMix64 sampler(sampler_seed);
  std::vector<double> logits(vocab);
  std::vector<double> perturbed(vocab);
  std::vector<std::uint8_t> green(vocab);
  std::vector<ShardAssignment> assignments(params.num_keys);
  std::vector<std::uint32_t> scratch;

  std::uint32_t prev2 = prompt_tail[0];
  std::uint32_t prev1 = prompt_tail[1];

  for (std::uint32_t t = 0; t < num_steps; ++t) {
    source.next_logits(prev2, prev1, logits);

    const std::uint32_t i = block_index(prev2, prev1, params.num_blocks);
    const std::uint32_t p = blocks[i].decimal;

    for (std::uint32_t j = 0; j < params.num_keys; ++j) {
      permute_and_partition_into(prf_hash(prev2, prev1, params.hash_keys[j]),
                                 vocab, params.block_bits, assignments[j],
                                 scratch);
    }

    std::uint32_t green_count = 0;
    if (params.scheme == Scheme::MPAC) {
      for (std::uint32_t v = 0; v < vocab; ++v) {
        green[v] = assignments[0].shard_of[v] == p;
        green_count += green[v];
      }
    } else {
      for (std::uint32_t v = 0; v < vocab; ++v) {
        green[v] = in_evergreen(assignments, p, v) ? 1 : 0;
        green_count += green[v];
      }
    }

    std::uint32_t sampled;
    if (green_count == 0) {
      ++result.skipped_bias_steps;
      sampled = sample_impl(logits, sampler, top_p);
    } else {
      perturbed.assign(logits.begin(), logits.end());
      for (std::uint32_t v = 0; v < vocab; ++v) {
        if (green[v]) perturbed[v] += params.bias;
      }
      sampled = sample_impl(perturbed, sampler, top_p);
    }

    result.green_hits += green[sampled];
    result.tokens.tokens.push_back(sampled);
    prev2 = prev1;
    prev1 = sampled;
  }
  return result;
}

TokenStream generate_clean(const LogitSource& source, std::uint32_t num_steps,
                           std::array<std::uint32_t, 2> prompt_tail,
                           std::uint64_t sampler_seed,
                           std::optional<double> top_p) {
  if (num_steps == 0) throw std::invalid_argument("num_steps must be positive");
  TokenStream stream;
  stream.bootstrap = prompt_tail;
  stream.tokens.reserve(num_steps);

  SplitMix64 sampler(sampler_seed);
  std::vector<double> logits(source.vocab_size());
  std::uint32_t prev2 = prompt_tail[0];
  std::uint32_t prev1 = prompt_tail[1];
  for (std::uint32_t t = 0; t < num_steps; ++t) {
    source.next_logits(prev2, prev1, logits);
    const std::uint32_t sampled = sample_impl(logits, sampler, top_p);
    stream.tokens.push_back(sampled);
    prev2 = prev1;
    prev1 = sampled;
  }
  return stream;
}

}  // namespace xmark
