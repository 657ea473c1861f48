#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xmark/attacks.hpp"
#include "xmark/decoder.hpp"
#include "xmark/params.hpp"
#include "xmark/toylm.hpp"

namespace xmark {

/// Sweep description: every combination of params_grid x t_values x attacks
/// (or no attack) is run over num_users independent users. Per-user messages
/// and seeds derive from trial_seed_base alone, so enlarging the grid or the
/// user count never perturbs existing trials.
struct ExperimentPlan {
  std::vector<WatermarkParams> params_grid;
  std::vector<std::uint32_t> t_values;
  std::uint32_t num_users = 50;
  std::uint32_t texts_per_user = 2;  // each text carries T / texts_per_user tokens
  ToyLmParams toylm;                 // vocab_size is taken from each grid point
  std::vector<AttackSpec> attacks;   // empty: decode unattacked streams
  MapMode decode_mode = MapMode::CTMM;
  std::uint64_t trial_seed_base = 0;
  std::string output_path;

  void validate() const;
};

struct ResultRow {
  std::string scheme;
  std::uint32_t message_bits = 0;
  std::uint32_t num_blocks = 0;
  std::uint32_t block_bits = 0;
  std::uint32_t num_keys = 0;
  double bias = 0.0;
  std::uint32_t total_tokens = 0;            // T per user
  std::optional<double> attack_delta;        // empty when no attack ran
  double mean_ba = 0.0;
  double exact_match_rate = 0.0;
  double mean_green_fraction = 0.0;
  double mean_fp_watermarked = 0.0;
  double mean_fp_clean = 0.0;
  std::uint32_t trials = 0;
};

/// Everything measured for one user at one grid point; the building block
/// shared by run_experiment and the verification suites.
struct UserTrial {
  Message truth;
  std::vector<TokenStream> watermarked;  // post-attack when an attack is set
  std::vector<TokenStream> clean;        // unwatermarked streams of equal shape
  DecodeReport report;
  DecodeReport clean_report;
  double ba = 0.0;
  bool exact = false;
  double green_fraction = 0.0;
};

// Seed-derivation tags for the per-user streams.
std::uint64_t user_seed(std::uint64_t trial_seed_base, std::uint32_t user_index,
                        std::uint32_t tag);
Message random_message(std::uint32_t message_bits, std::uint64_t seed);

// Runs one user end to end: derive message, encode texts_per_user streams,
// apply the attack when given, decode jointly, decode the clean twins.
UserTrial run_user_trial(std::uint32_t user_index, const WatermarkParams& params,
                         std::uint32_t total_tokens, std::uint32_t texts_per_user,
                         const ToyLmParams& toylm,
                         const std::optional<AttackSpec>& attack, MapMode mode,
                         std::uint64_t trial_seed_base);

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan);

// RFC-4180-style CSV, fixed header, floats with 4 decimals. Empty rows give
// a header-only file.
void emit_csv(std::span<const ResultRow> rows, const std::string& path);
std::string csv_to_string(std::span<const ResultRow> rows);

// Index-parallel map over [0, count): deterministic regardless of thread
// count because each index owns its output slot.
void parallel_for(std::uint32_t count,
                  const std::function<void(std::uint32_t)>& body);

}  // namespace xmark
