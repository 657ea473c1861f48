#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <span>

namespace xmark {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic 64-bit stream (SplitMix64). Every piece of randomness in
/// the library -- vocabulary shuffles, synthetic logits, token sampling,
/// attacks -- is drawn from an instance of this generator, so equal seeds
/// give bit-equal behaviour across runs.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Uniform double in (0, 1], built from the top 53 bits of one draw.
  double next_unit() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Standard normals via Box-Muller over consecutive (0,1] draws; pairs of
// uniforms map to pairs of outputs, the trailing sine is dropped when the
// span has odd length.
inline void fill_standard_normal(SplitMix64& rng, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); i += 2) {
    const double u1 = rng.next_unit();
    const double u2 = rng.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i] = radius * std::cos(angle);
    if (i + 1 < out.size()) {
      out[i + 1] = radius * std::sin(angle);
    }
  }
}

}  // namespace xmark
