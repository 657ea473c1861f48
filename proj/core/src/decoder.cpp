#include "xmark/decoder.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "xmark/codec.hpp"
#include "xmark/shard.hpp"
#include "xmark/stats.hpp"

namespace xmark {

Ctmm accumulate(const TokenStream& stream, const WatermarkParams& params,
                MapMode mode, Ctmm existing) {
  params.validate();
  const std::uint32_t num_shards = params.num_shards();
  if (existing.counts.empty()) {
    existing = Ctmm(params.num_blocks, num_shards);
  }
  if (existing.num_blocks != params.num_blocks ||
      existing.num_shards != num_shards) {
    throw std::invalid_argument("existing matrix shape does not match params");
  }
  if (stream.tokens.size() < 3) return existing;

  for (auto token : stream.tokens) {
    if (token >= params.vocab_size) {
      throw std::invalid_argument("token id exceeds vocab_size");
    }
  }

  std::vector<ShardAssignment> assignments(params.num_keys);
  std::vector<std::uint32_t> scratch;
  std::vector<std::uint32_t> cc(num_shards);

  // Decoding starts at the third token; the first two only provide context.
  for (std::size_t t = 2; t < stream.tokens.size(); ++t) {
    const std::uint32_t prev2 = stream.tokens[t - 2];
    const std::uint32_t prev1 = stream.tokens[t - 1];
    const std::uint32_t token = stream.tokens[t];
    const std::uint32_t i = block_index(prev2, prev1, params.num_blocks);

    std::fill(cc.begin(), cc.end(), 0u);
    for (std::uint32_t j = 0; j < params.num_keys; ++j) {
      permute_and_partition_into(prf_hash(prev2, prev1, params.hash_keys[j]),
                                 params.vocab_size, params.block_bits,
                                 assignments[j], scratch);
      ++cc[assignments[j].shard_of[token]];
    }

    auto* row = existing.counts.data() +
                static_cast<std::size_t>(i) * num_shards;
    if (mode == MapMode::CTMM) {
      for (std::uint32_t u = 0; u < num_shards; ++u) {
        const std::uint32_t update = cc[u] > 0 ? 1 : 0;
        assert(update <= 1);
        row[u] += update;
      }
    } else {
      for (std::uint32_t u = 0; u < num_shards; ++u) row[u] += cc[u];
    }
    ++existing.tokens_seen;
  }
  return existing;
}

Ctmm accumulate(const TokenStream& stream, const WatermarkParams& params,
                MapMode mode) {
  return accumulate(stream, params, mode, Ctmm{});
}

Message recover(const Ctmm& ctmm, const WatermarkParams& params) {
  params.validate();
  if (ctmm.num_blocks != params.num_blocks ||
      ctmm.num_shards != params.num_shards()) {
    throw std::invalid_argument("matrix shape does not match params");
  }
  const bool use_argmax = params.scheme == Scheme::MPAC;
  std::vector<MessageBlock> blocks;
  blocks.reserve(params.num_blocks);
  for (std::uint32_t i = 0; i < params.num_blocks; ++i) {
    const auto row = ctmm.row(i);
    std::uint32_t best = 0;
    for (std::uint32_t u = 1; u < ctmm.num_shards; ++u) {
      const bool better = use_argmax ? row[u] > row[best] : row[u] < row[best];
      if (better) best = u;  // ties keep the smallest index
    }
    blocks.push_back(block_to_binary(best, params.block_bits));
  }
  return concat_blocks(blocks);
}

double fp_statistic(const Ctmm& ctmm) {
  if (ctmm.tokens_seen == 0) {
    throw std::invalid_argument("fp_statistic is undefined on an empty matrix");
  }
  std::vector<double> row_values(ctmm.num_shards);
  double total = 0.0;
  for (std::uint32_t i = 0; i < ctmm.num_blocks; ++i) {
    const auto row = ctmm.row(i);
    for (std::uint32_t u = 0; u < ctmm.num_shards; ++u) {
      row_values[u] = static_cast<double>(row[u]);
    }
    total += population_stddev(row_values);
  }
  return total / ctmm.num_blocks;
}

DecodeReport decode(std::span<const TokenStream> streams,
                    const WatermarkParams& params, MapMode mode) {
  params.validate();
  if (streams.empty()) {
    throw std::invalid_argument("decode needs at least one stream");
  }
  DecodeReport report;
  report.ctmm = Ctmm(params.num_blocks, params.num_shards());
  for (const auto& stream : streams) {
    report.ctmm = accumulate(stream, params, mode, std::move(report.ctmm));
  }
  report.message = recover(report.ctmm, params);
  if (report.ctmm.tokens_seen == 0) {
    report.undecodable = true;
    report.fp_statistic = 0.0;
  } else {
    report.fp_statistic = fp_statistic(report.ctmm);
  }
  return report;
}

double calibrate_fp_threshold(std::span<const DecodeReport> unwatermarked_reports,
                              double target_fpr) {
  if (unwatermarked_reports.size() < 50) {
    throw std::invalid_argument("threshold calibration needs at least 50 reports");
  }
  if (!(target_fpr > 0.0 && target_fpr < 1.0)) {
    throw std::invalid_argument("target_fpr must lie strictly inside (0, 1)");
  }
  std::vector<double> stats;
  stats.reserve(unwatermarked_reports.size());
  for (const auto& r : unwatermarked_reports) stats.push_back(r.fp_statistic);
  return empirical_quantile(stats, 1.0 - target_fpr);
}

}  // namespace xmark
