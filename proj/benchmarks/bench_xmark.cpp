#include <benchmark/benchmark.h>

#include <optional>
#include <vector>

#include "xmark/decoder.hpp"
#include "xmark/encoder.hpp"
#include "xmark/prf.hpp"
#include "xmark/shard.hpp"
#include "xmark/toylm.hpp"

namespace {

xmark::WatermarkParams bench_params(std::uint32_t vocab, std::uint32_t num_keys) {
  std::vector<std::uint64_t> keys;
  for (std::uint32_t j = 0; j < num_keys; ++j) keys.push_back(500 + j);
  return xmark::make_params(xmark::Scheme::XMARK, vocab, 16, 8, num_keys, 2.0,
                            std::move(keys));
}

void BM_PrfHash(benchmark::State& state) {
  std::uint64_t acc = 0;
  std::uint32_t i = 0;
  for (auto _ : state) {
    acc ^= xmark::prf_hash(i, i + 1, 42).value;
    ++i;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PrfHash);

void BM_PermuteAndPartition(benchmark::State& state) {
  const auto vocab = static_cast<std::uint32_t>(state.range(0));
  xmark::ShardAssignment out;
  std::vector<std::uint32_t> scratch;
  std::uint64_t seed = 7;
  for (auto _ : state) {
    xmark::permute_and_partition_into(xmark::HashSeed{seed++}, vocab, 2, out,
                                      scratch);
    benchmark::DoNotOptimize(out.shard_of.data());
  }
  state.SetItemsProcessed(state.iterations() * vocab);
}
BENCHMARK(BM_PermuteAndPartition)->Arg(1024)->Arg(32768);

void BM_ToyLogits(benchmark::State& state) {
  const auto vocab = static_cast<std::uint32_t>(state.range(0));
  xmark::ToyLm lm({.model_seed = 3, .entropy_temp = 1.0, .vocab_size = vocab});
  std::vector<double> logits(vocab);
  std::uint32_t c = 0;
  for (auto _ : state) {
    lm.next_logits(c, c + 1, logits);
    benchmark::DoNotOptimize(logits.data());
    ++c;
  }
  state.SetItemsProcessed(state.iterations() * vocab);
}
BENCHMARK(BM_ToyLogits)->Arg(1024);

void BM_EncodeStream(benchmark::State& state) {
  const auto num_keys = static_cast<std::uint32_t>(state.range(0));
  const auto params = bench_params(1024, num_keys);
  xmark::ToyLm lm({.model_seed = 3, .entropy_temp = 1.0, .vocab_size = 1024});
  const auto message = xmark::Message::from_string("1011001110001101");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto result = xmark::encode(message, params, lm, 150, {0, 1}, seed++);
    benchmark::DoNotOptimize(result.tokens.tokens.data());
  }
  state.SetItemsProcessed(state.iterations() * 150);
}
BENCHMARK(BM_EncodeStream)->Arg(1)->Arg(2)->Arg(4);

void BM_DecodeAccumulate(benchmark::State& state) {
  const auto num_keys = static_cast<std::uint32_t>(state.range(0));
  const auto params = bench_params(1024, num_keys);
  xmark::ToyLm lm({.model_seed = 3, .entropy_temp = 1.0, .vocab_size = 1024});
  const auto encoded = xmark::encode(xmark::Message::from_string("1011001110001101"),
                                     params, lm, 150, {0, 1}, 9);
  for (auto _ : state) {
    auto ctmm = xmark::accumulate(encoded.tokens, params, xmark::MapMode::CTMM);
    benchmark::DoNotOptimize(ctmm.counts.data());
  }
  state.SetItemsProcessed(state.iterations() * 148);
}
BENCHMARK(BM_DecodeAccumulate)->Arg(1)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
