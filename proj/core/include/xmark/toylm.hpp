#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xmark/rng.hpp"

namespace xmark {

/// Contract any next-token logit source satisfies. Implementations must be
/// deterministic in (context, construction parameters) and emit finite
/// logits of length vocab_size().
class LogitSource {
 public:
  virtual ~LogitSource() = default;

  virtual std::uint32_t vocab_size() const = 0;

  // Writes the logit vector for the step following (x_prev2, x_prev1).
  // out.size() must equal vocab_size().
  virtual void next_logits(std::uint32_t x_prev2, std::uint32_t x_prev1,
                           std::span<double> out) const = 0;
};

struct ToyLmParams {
  std::uint64_t model_seed = 0;
  double entropy_temp = 1.0;  // tau; larger -> flatter (higher-entropy) logits
  std::uint32_t vocab_size = 0;
};

/// Synthetic language model: context-hashed Gaussian logits. Each context
/// gets an independent N(0, 1/tau^2) logit vector, reproducible from
/// (context, model_seed). tau is the entropy dial: large tau pushes the
/// softmax toward uniform, small tau toward a near-deterministic argmax.
class ToyLm final : public LogitSource {
 public:
  explicit ToyLm(const ToyLmParams& params);

  std::uint32_t vocab_size() const override { return params_.vocab_size; }
  void next_logits(std::uint32_t x_prev2, std::uint32_t x_prev1,
                   std::span<double> out) const override;

  const ToyLmParams& params() const { return params_; }

 private:
  ToyLmParams params_;
};

// Free-function form of ToyLm::next_logits.
std::vector<double> toy_logits(std::uint32_t x_prev2, std::uint32_t x_prev1,
                               const ToyLmParams& params);

}  // namespace xmark
