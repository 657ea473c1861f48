#include "xmark/toylm.hpp"

#include <stdexcept>
#include <vector>

#include "xmark/prf.hpp"

namespace xmark {

ToyLm::ToyLm(const ToyLmParams& params) : params_(params) {
  if (params_.vocab_size == 0) {
    throw std::invalid_argument("toy model needs a positive vocab_size");
  }
  if (!(params_.entropy_temp > 0.0)) {
    throw std::invalid_argument("entropy_temp must be positive");
  }
}

void ToyLm::next_logits(std::uint32_t x_prev2, std::uint32_t x_prev1,
                        std::span<double> out) const {
  if (out.size() != params_.vocab_size) {
    throw std::invalid_argument("logit buffer size must equal vocab_size");
  }
  SplitMix64 rng(prf_hash(x_prev2, x_prev1, params_.model_seed).value);
  fill_standard_normal(rng, out);
  const double inv_temp = 1.0 / params_.entropy_temp;
  for (auto& v : out) v *= inv_temp;
}

std::vector<double> toy_logits(std::uint32_t x_prev2, std::uint32_t x_prev1,
                               const ToyLmParams& params) {
  ToyLm lm(params);
  std::vector<double> out(params.vocab_size);
  lm.next_logits(x_prev2, x_prev1, out);
  return out;
}

}  // namespace xmark
