#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xmark/params.hpp"

namespace xmark {

// Splits m into params.num_blocks contiguous blocks of block_bits bits each;
// block i holds bits [i*d, (i+1)*d). Throws on length mismatch.
std::vector<MessageBlock> divide_message(const Message& m,
                                         const WatermarkParams& params);

// MSB-first d-bit representation of p; inverse of MessageBlock::decimal.
// Throws std::domain_error when p >= 2^d.
MessageBlock block_to_binary(std::uint32_t p, std::uint32_t d);

// Concatenation in block order; inverse of divide_message.
Message concat_blocks(std::span<const MessageBlock> blocks);

// Block selected at one generation step: (x_{t-2} + x_{t-1}) mod r.
inline std::uint32_t block_index(std::uint32_t x_prev2, std::uint32_t x_prev1,
                                 std::uint32_t num_blocks) {
  return static_cast<std::uint32_t>(
      (static_cast<std::uint64_t>(x_prev2) + x_prev1) % num_blocks);
}

// Fraction of positions where the two messages agree. Throws on length
// mismatch.
double bit_accuracy(const Message& truth, const Message& decoded);

}  // namespace xmark
