#include "xmark/codec.hpp"

#include <stdexcept>

namespace xmark {

std::vector<MessageBlock> divide_message(const Message& m,
                                         const WatermarkParams& params) {
  params.validate();
  if (m.bits.size() != params.message_bits) {
    throw std::invalid_argument("message length does not match message_bits");
  }
  const std::uint32_t d = params.block_bits;
  std::vector<MessageBlock> blocks(params.num_blocks);
  for (std::uint32_t i = 0; i < params.num_blocks; ++i) {
    auto& block = blocks[i];
    block.bits.assign(m.bits.begin() + static_cast<std::ptrdiff_t>(i) * d,
                      m.bits.begin() + static_cast<std::ptrdiff_t>(i + 1) * d);
    block.decimal = 0;
    for (auto bit : block.bits) block.decimal = (block.decimal << 1) | bit;
  }
  return blocks;
}

MessageBlock block_to_binary(std::uint32_t p, std::uint32_t d) {
  if (d == 0 || d >= 32 || p >= (1u << d)) {
    throw std::domain_error("block value out of range for block_bits");
  }
  MessageBlock block;
  block.decimal = p;
  block.bits.resize(d);
  for (std::uint32_t i = 0; i < d; ++i) {
    block.bits[i] = static_cast<std::uint8_t>((p >> (d - 1 - i)) & 1u);
  }
  return block;
}

Message concat_blocks(std::span<const MessageBlock> blocks) {
  Message m;
  for (const auto& block : blocks) {
    m.bits.insert(m.bits.end(), block.bits.begin(), block.bits.end());
  }
  return m;
}

double bit_accuracy(const Message& truth, const Message& decoded) {
  if (truth.bits.size() != decoded.bits.size() || truth.bits.empty()) {
    throw std::invalid_argument("bit_accuracy requires equal nonempty lengths");
  }
  std::size_t matches = 0;
  for (std::size_t i = 0; i < truth.bits.size(); ++i) {
    matches += truth.bits[i] == decoded.bits[i];
  }
  return static_cast<double>(matches) / static_cast<double>(truth.bits.size());
}

}  // namespace xmark
