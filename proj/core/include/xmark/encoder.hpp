#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xmark/params.hpp"
#include "xmark/rng.hpp"
#include "xmark/toylm.hpp"

namespace xmark {

struct EncodeResult {
  TokenStream tokens;
  std::uint64_t green_hits = 0;  // sampled tokens that fell in the biased list
  std::uint32_t steps = 0;
  std::uint32_t skipped_bias_steps = 0;  // steps where the evergreen list was empty
};

// Copy of `logits` with +delta on exactly the tokens where green[v] != 0.
std::vector<double> perturb_logits(std::span<const double> logits,
                                   std::span<const std::uint8_t> green,
                                   double delta);

// Softmax sampling by inverse CDF: subtract the max logit, exponentiate,
// draw one (0,1] uniform from `rng`. Advances the stream by exactly one
// draw. With top_p set, sampling is restricted to the smallest
// descending-probability prefix whose mass reaches top_p (ties kept in
// token-id order), still using a single draw.
std::uint32_t sample_token(std::span<const double> logits, SplitMix64& rng,
                           std::optional<double> top_p = std::nullopt);

// Block-wise watermark encoder. Walks T steps from prompt_tail as
// (x_-2, x_-1), biasing the scheme's green list by params.bias at each step
// and sampling from the perturbed softmax. Sampler randomness is a separate
// stream from the watermark keys. If a step's green list comes up empty the
// step samples from the raw logits and is counted in skipped_bias_steps.
EncodeResult encode(const Message& message, const WatermarkParams& params,
                    const LogitSource& source, std::uint32_t num_steps,
                    std::array<std::uint32_t, 2> prompt_tail,
                    std::uint64_t sampler_seed,
                    std::optional<double> top_p = std::nullopt);

// Unwatermarked generation from the same source and sampler convention;
// identical to encode() with bias 0 but skips the watermark bookkeeping.
TokenStream generate_clean(const LogitSource& source, std::uint32_t num_steps,
                           std::array<std::uint32_t, 2> prompt_tail,
                           std::uint64_t sampler_seed,
                           std::optional<double> top_p = std::nullopt);

}  // namespace xmark
