#include "xmark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "xmark/rng.hpp"

namespace xmark {

void AttackSpec::validate() const {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("attack delta must lie in [0, 1]");
  }
  if (segment_len == 0) {
    throw std::invalid_argument("segment_len must be positive");
  }
}

TokenStream copy_paste(const TokenStream& wm, const TokenStream& clean,
                       const AttackSpec& spec) {
  spec.validate();
  if (spec.kind != AttackKind::COPY_PASTE) {
    throw std::invalid_argument("spec kind is not COPY_PASTE");
  }
  TokenStream out = wm;
  const std::size_t n = wm.tokens.size();
  if (n == 0 || spec.delta == 0.0) return out;

  const std::size_t seg = spec.segment_len;
  const std::size_t num_slots = (n + seg - 1) / seg;
  const auto wanted = static_cast<std::size_t>(
      std::ceil(spec.delta * static_cast<double>(n) / static_cast<double>(seg)));
  const std::size_t chosen = std::min(wanted, num_slots);

  // Seeded choice of slots: shuffle the slot indices and keep a prefix,
  // applied in ascending position order so clean material is consumed
  // sequentially.
  std::vector<std::size_t> slots(num_slots);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  SplitMix64 rng(spec.attack_seed);
  for (std::size_t i = num_slots - 1; i >= 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next() % (i + 1));
    std::swap(slots[i], slots[j]);
  }
  slots.resize(chosen);
  std::sort(slots.begin(), slots.end());

  std::size_t required = 0;
  for (auto s : slots) required += std::min((s + 1) * seg, n) - s * seg;
  if (clean.tokens.size() < required) {
    throw std::invalid_argument("not enough clean material for copy-paste");
  }

  std::size_t src = 0;
  for (auto s : slots) {
    const std::size_t begin = s * seg;
    const std::size_t end = std::min(begin + seg, n);
    for (std::size_t pos = begin; pos < end; ++pos) {
      out.tokens[pos] = clean.tokens[src++];
    }
  }
  return out;
}

TokenStream substitute(const TokenStream& wm, const AttackSpec& spec,
                       std::uint32_t vocab_size) {
  spec.validate();
  if (spec.kind != AttackKind::SUBSTITUTE) {
    throw std::invalid_argument("spec kind is not SUBSTITUTE");
  }
  if (vocab_size == 0) throw std::invalid_argument("vocab_size must be positive");
  TokenStream out = wm;
  SplitMix64 rng(spec.attack_seed);
  for (auto& token : out.tokens) {
    if (rng.next_unit() <= spec.delta) {
      token = static_cast<std::uint32_t>(rng.next() % vocab_size);
    }
  }
  return out;
}

}  // namespace xmark
