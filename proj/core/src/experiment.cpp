#include "xmark/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "xmark/codec.hpp"
#include "xmark/encoder.hpp"
#include "xmark/prf.hpp"
#include "xmark/stats.hpp"

namespace xmark {

namespace {

// Seed-derivation tags; per-user streams never collide across roles.
constexpr std::uint32_t kTagMessage = 0;
constexpr std::uint32_t kTagSampler = 0x100;  // + text index
constexpr std::uint32_t kTagClean = 0x200;    // + text index
constexpr std::uint32_t kTagAttack = 0x300;   // + text index

void append_csv_double(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  out += buf;
}

}  // namespace

std::uint64_t user_seed(std::uint64_t trial_seed_base, std::uint32_t user_index,
                        std::uint32_t tag) {
  return prf_hash(user_index, tag, trial_seed_base).value;
}

Message random_message(std::uint32_t message_bits, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Message m;
  m.bits.resize(message_bits);
  for (auto& bit : m.bits) bit = static_cast<std::uint8_t>(rng.next() & 1u);
  return m;
}

void ExperimentPlan::validate() const {
  if (params_grid.empty()) throw std::invalid_argument("params_grid is empty");
  for (const auto& p : params_grid) p.validate();
  if (t_values.empty()) throw std::invalid_argument("t_values is empty");
  if (num_users == 0) throw std::invalid_argument("num_users must be positive");
  if (texts_per_user == 0) {
    throw std::invalid_argument("texts_per_user must be positive");
  }
  for (auto t : t_values) {
    if (t == 0 || t % texts_per_user != 0) {
      throw std::invalid_argument("every T must be a positive multiple of texts_per_user");
    }
  }
  if (!(toylm.entropy_temp > 0.0)) {
    throw std::invalid_argument("entropy_temp must be positive");
  }
  for (const auto& a : attacks) a.validate();
}

UserTrial run_user_trial(std::uint32_t user_index, const WatermarkParams& params,
                         std::uint32_t total_tokens, std::uint32_t texts_per_user,
                         const ToyLmParams& toylm,
                         const std::optional<AttackSpec>& attack, MapMode mode,
                         std::uint64_t trial_seed_base) {
  ToyLmParams lm_params = toylm;
  lm_params.vocab_size = params.vocab_size;
  ToyLm source(lm_params);

  const std::uint32_t text_len = total_tokens / texts_per_user;

  UserTrial trial;
  trial.truth = random_message(params.message_bits,
                               user_seed(trial_seed_base, user_index, kTagMessage));

  std::uint64_t green_hits = 0;
  std::uint64_t steps = 0;
  for (std::uint32_t tex = 0; tex < texts_per_user; ++tex) {
    auto encoded = encode(trial.truth, params, source, text_len, {0, 1},
                          user_seed(trial_seed_base, user_index, kTagSampler + tex));
    green_hits += encoded.green_hits;
    steps += encoded.steps;
    trial.clean.push_back(generate_clean(
        source, text_len, {0, 1},
        user_seed(trial_seed_base, user_index, kTagClean + tex)));

    if (attack) {
      AttackSpec per_text = *attack;
      per_text.attack_seed = user_seed(
          trial_seed_base, user_index,
          kTagAttack + tex) ^ mix64(attack->attack_seed);
      if (attack->kind == AttackKind::COPY_PASTE) {
        trial.watermarked.push_back(
            copy_paste(encoded.tokens, trial.clean.back(), per_text));
      } else {
        trial.watermarked.push_back(
            substitute(encoded.tokens, per_text, params.vocab_size));
      }
    } else {
      trial.watermarked.push_back(std::move(encoded.tokens));
    }
  }
  trial.green_fraction =
      steps > 0 ? static_cast<double>(green_hits) / static_cast<double>(steps) : 0.0;

  trial.report = decode(trial.watermarked, params, mode);
  trial.clean_report = decode(trial.clean, params, mode);
  trial.ba = bit_accuracy(trial.truth, trial.report.message);
  trial.exact = trial.truth == trial.report.message;
  return trial;
}

void parallel_for(std::uint32_t count,
                  const std::function<void(std::uint32_t)>& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers = std::min<unsigned>(hw == 0 ? 1 : hw, count);
  if (workers <= 1) {
    for (std::uint32_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint32_t> cursor{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const std::uint32_t i = cursor.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan) {
  plan.validate();

  struct Cell {
    const WatermarkParams* params;
    std::uint32_t total_tokens;
    std::optional<AttackSpec> attack;
  };
  std::vector<Cell> cells;
  for (const auto& params : plan.params_grid) {
    for (auto t : plan.t_values) {
      if (plan.attacks.empty()) {
        cells.push_back({&params, t, std::nullopt});
      } else {
        for (const auto& a : plan.attacks) cells.push_back({&params, t, a});
      }
    }
  }

  std::vector<ResultRow> rows;
  rows.reserve(cells.size());
  for (const auto& cell : cells) {
    std::vector<double> ba(plan.num_users);
    std::vector<double> exact(plan.num_users);
    std::vector<double> green(plan.num_users);
    std::vector<double> fp_wm(plan.num_users);
    std::vector<double> fp_clean(plan.num_users);

    parallel_for(plan.num_users, [&](std::uint32_t u) {
      const UserTrial trial =
          run_user_trial(u, *cell.params, cell.total_tokens, plan.texts_per_user,
                         plan.toylm, cell.attack, plan.decode_mode,
                         plan.trial_seed_base);
      ba[u] = trial.ba;
      exact[u] = trial.exact ? 1.0 : 0.0;
      green[u] = trial.green_fraction;
      fp_wm[u] = trial.report.fp_statistic;
      fp_clean[u] = trial.clean_report.fp_statistic;
    });

    ResultRow row;
    row.scheme = std::string(scheme_name(cell.params->scheme));
    row.message_bits = cell.params->message_bits;
    row.num_blocks = cell.params->num_blocks;
    row.block_bits = cell.params->block_bits;
    row.num_keys = cell.params->num_keys;
    row.bias = cell.params->bias;
    row.total_tokens = cell.total_tokens;
    if (cell.attack) row.attack_delta = cell.attack->delta;
    row.mean_ba = mean(ba);
    row.exact_match_rate = mean(exact);
    row.mean_green_fraction = mean(green);
    row.mean_fp_watermarked = mean(fp_wm);
    row.mean_fp_clean = mean(fp_clean);
    row.trials = plan.num_users;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_to_string(std::span<const ResultRow> rows) {
  std::string out =
      "scheme,b,r,d,k,bias,T,attack_delta,mean_ba,exact_match_rate,"
      "mean_green_fraction,mean_fp_watermarked,mean_fp_clean,trials\r\n";
  for (const auto& row : rows) {
    out += row.scheme;
    out += ',';
    out += std::to_string(row.message_bits);
    out += ',';
    out += std::to_string(row.num_blocks);
    out += ',';
    out += std::to_string(row.block_bits);
    out += ',';
    out += std::to_string(row.num_keys);
    out += ',';
    append_csv_double(out, row.bias);
    out += ',';
    out += std::to_string(row.total_tokens);
    out += ',';
    if (row.attack_delta) append_csv_double(out, *row.attack_delta);
    out += ',';
    append_csv_double(out, row.mean_ba);
    out += ',';
    append_csv_double(out, row.exact_match_rate);
    out += ',';
    append_csv_double(out, row.mean_green_fraction);
    out += ',';
    append_csv_double(out, row.mean_fp_watermarked);
    out += ',';
    append_csv_double(out, row.mean_fp_clean);
    out += ',';
    out += std::to_string(row.trials);
    out += "\r\n";
  }
  return out;
}

void emit_csv(std::span<const ResultRow> rows, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = csv_to_string(rows);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace xmark
