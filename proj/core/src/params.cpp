#include "xmark/params.hpp"

#include <stdexcept>
#include <unordered_set>

namespace xmark {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::XMARK: return "XMARK";
    case Scheme::LOSO: return "LOSO";
    case Scheme::MPAC: return "MPAC";
  }
  throw std::invalid_argument("unknown scheme value");
}

Scheme parse_scheme(std::string_view name) {
  if (name == "XMARK") return Scheme::XMARK;
  if (name == "LOSO") return Scheme::LOSO;
  if (name == "MPAC") return Scheme::MPAC;
  throw std::invalid_argument("unknown scheme name: " + std::string(name));
}

void WatermarkParams::validate() const {
  if (vocab_size == 0) throw std::invalid_argument("vocab_size must be positive");
  if (message_bits == 0 || message_bits % 2 != 0) {
    throw std::invalid_argument("message_bits must be a positive even number");
  }
  if (num_blocks == 0 || message_bits % num_blocks != 0) {
    throw std::invalid_argument("num_blocks must divide message_bits");
  }
  if (block_bits != message_bits / num_blocks) {
    throw std::invalid_argument("block_bits must equal message_bits / num_blocks");
  }
  if (block_bits < 2) throw std::invalid_argument("block_bits must be at least 2");
  if (block_bits >= 31 || (1u << block_bits) > vocab_size) {
    throw std::invalid_argument("vocabulary too small for 2^block_bits shards");
  }
  if (num_keys == 0) throw std::invalid_argument("num_keys must be positive");
  if ((scheme == Scheme::LOSO || scheme == Scheme::MPAC) && num_keys != 1) {
    throw std::invalid_argument("LOSO and MPAC require num_keys == 1");
  }
  if (bias < 0.0) throw std::invalid_argument("bias must be non-negative");
  if (hash_keys.size() != num_keys) {
    throw std::invalid_argument("hash_keys must hold exactly num_keys entries");
  }
  std::unordered_set<std::uint64_t> seen(hash_keys.begin(), hash_keys.end());
  if (seen.size() != hash_keys.size()) {
    throw std::invalid_argument("hash_keys must be pairwise distinct");
  }
}

WatermarkParams make_params(Scheme scheme, std::uint32_t vocab_size,
                            std::uint32_t message_bits, std::uint32_t num_blocks,
                            std::uint32_t num_keys, double bias,
                            std::vector<std::uint64_t> hash_keys) {
  WatermarkParams p;
  p.scheme = scheme;
  p.vocab_size = vocab_size;
  p.message_bits = message_bits;
  p.num_blocks = num_blocks;
  p.block_bits = num_blocks == 0 ? 0 : message_bits / num_blocks;
  p.num_keys = num_keys;
  p.bias = bias;
  p.hash_keys = std::move(hash_keys);
  p.validate();
  return p;
}

std::string Message::to_string() const {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

Message Message::from_string(std::string_view ascii_bits) {
  Message m;
  m.bits.reserve(ascii_bits.size());
  for (char c : ascii_bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("message must be an ASCII bit-string");
    }
    m.bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return m;
}

}  // namespace xmark
