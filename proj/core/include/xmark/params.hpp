#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xmark {

enum class Scheme {
  XMARK,  // evergreen list: intersection of k leave-one-shard-out green lists
  LOSO,   // single-key leave-one-shard-out (XMARK with k = 1)
  MPAC,   // single-key, green list = the message shard itself
};

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);

/// All knobs of the encode/decode pipeline. Immutable after construction;
/// call validate() (or use make_params) before handing one to an operation.
struct WatermarkParams {
  std::uint32_t vocab_size = 0;    // V
  std::uint32_t message_bits = 0;  // b, even and positive
  std::uint32_t num_blocks = 0;    // r, divides b
  std::uint32_t block_bits = 0;    // d = b / r, at least 2
  std::uint32_t num_keys = 0;      // k
  double bias = 0.0;               // delta, logit units, non-negative
  std::vector<std::uint64_t> hash_keys;  // k pairwise-distinct keys
  Scheme scheme = Scheme::XMARK;

  std::uint32_t num_shards() const { return 1u << block_bits; }

  // Throws std::invalid_argument when any invariant fails.
  void validate() const;
};

// Convenience constructor: derives block_bits from message_bits / num_blocks
// and validates the result.
WatermarkParams make_params(Scheme scheme, std::uint32_t vocab_size,
                            std::uint32_t message_bits, std::uint32_t num_blocks,
                            std::uint32_t num_keys, double bias,
                            std::vector<std::uint64_t> hash_keys);

/// b-bit binary payload. bits[i] is the i-th message bit, values in {0,1}.
struct Message {
  std::vector<std::uint8_t> bits;

  bool operator==(const Message&) const = default;

  std::string to_string() const;
  static Message from_string(std::string_view ascii_bits);
};

/// One d-bit slice of a message, with its decimal value (MSB-first).
struct MessageBlock {
  std::vector<std::uint8_t> bits;
  std::uint32_t decimal = 0;

  bool operator==(const MessageBlock&) const = default;
};

/// Ordered token ids plus the sentinel pair used as (x_-2, x_-1) when no
/// prompt context exists. Every token id must be < vocab_size.
struct TokenStream {
  std::vector<std::uint32_t> tokens;
  std::array<std::uint32_t, 2> bootstrap = {0, 1};
};

}  // namespace xmark
