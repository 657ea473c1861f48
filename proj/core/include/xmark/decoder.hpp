#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xmark/params.hpp"

namespace xmark {

enum class MapMode {
  CTMM,  // row update is sign(cc): each shard cell grows by at most 1 per token
  TMM,   // row update is cc itself: up to k counts per token
};

/// Token-shard mapping matrix A in N^{r x 2^d}, plus the number of tokens
/// folded into it. Counts accumulate across texts when decoding several
/// streams from one author.
struct Ctmm {
  std::uint32_t num_blocks = 0;
  std::uint32_t num_shards = 0;
  std::vector<std::uint64_t> counts;  // row-major, num_blocks * num_shards
  std::uint64_t tokens_seen = 0;

  Ctmm() = default;
  Ctmm(std::uint32_t rows, std::uint32_t cols)
      : num_blocks(rows), num_shards(cols),
        counts(static_cast<std::size_t>(rows) * cols, 0) {}

  std::uint64_t at(std::uint32_t row, std::uint32_t col) const {
    return counts[static_cast<std::size_t>(row) * num_shards + col];
  }
  std::span<const std::uint64_t> row(std::uint32_t i) const {
    return {counts.data() + static_cast<std::size_t>(i) * num_shards, num_shards};
  }
};

struct DecodeReport {
  Message message;
  Ctmm ctmm;
  double fp_statistic = 0.0;
  bool undecodable = false;
};

// Folds one suspect stream into `existing`. Decoding starts at the third
// token: positions 0 and 1 only provide context for the block index and the
// hash seeds. Streams shorter than 3 tokens contribute nothing.
Ctmm accumulate(const TokenStream& stream, const WatermarkParams& params,
                MapMode mode, Ctmm existing);
Ctmm accumulate(const TokenStream& stream, const WatermarkParams& params,
                MapMode mode);

// Per-row argmin (XMARK / LOSO) or argmax (MPAC), ties broken toward the
// smallest shard index, then codec reassembly into a b-bit message.
Message recover(const Ctmm& ctmm, const WatermarkParams& params);

// Joint decode of all streams into one matrix, then recovery plus the
// false-positive statistic. Reports undecodable when no stream contributed
// a token.
DecodeReport decode(std::span<const TokenStream> streams,
                    const WatermarkParams& params, MapMode mode);

// Mean over rows of the population standard deviation of the row counts.
// Low values indicate unwatermarked text. Throws when tokens_seen == 0.
double fp_statistic(const Ctmm& ctmm);

// (1 - target_fpr) empirical quantile of the fp statistic over reports from
// unwatermarked text. Requires at least 50 reports and 0 < target_fpr < 1.
double calibrate_fp_threshold(std::span<const DecodeReport> unwatermarked_reports,
                              double target_fpr);

}  // namespace xmark
