#pragma once

#include <cstdint>

#include "xmark/params.hpp"

namespace xmark {

enum class AttackKind {
  COPY_PASTE,  // splice unwatermarked segments into the stream
  SUBSTITUTE,  // per-position random token replacement
};

struct AttackSpec {
  AttackKind kind = AttackKind::COPY_PASTE;
  double delta = 0.0;  // fraction of unwatermarked content / substitution rate
  std::uint32_t segment_len = 10;  // copy-paste granularity, tokens
  std::uint64_t attack_seed = 0;

  void validate() const;  // throws when delta is outside [0, 1] or segment_len == 0
};

// Replaces ceil(delta * |wm| / segment_len) non-overlapping segments, aligned
// to multiples of segment_len, with material taken sequentially from `clean`.
// Output length equals |wm|. Throws when clean is too short.
TokenStream copy_paste(const TokenStream& wm, const TokenStream& clean,
                       const AttackSpec& spec);

// Each position independently resampled to a uniform token (the original
// value included) with probability delta.
TokenStream substitute(const TokenStream& wm, const AttackSpec& spec,
                       std::uint32_t vocab_size);

}  // namespace xmark
