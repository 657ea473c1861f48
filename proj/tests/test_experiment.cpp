#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xmark/experiment.hpp"
#include "xmark/io.hpp"

using namespace xmark;

namespace {

ExperimentPlan smoke_plan() {
  ExperimentPlan plan;
  plan.params_grid = {
      make_params(Scheme::XMARK, 1024, 8, 4, 2, 2.0, {3, 99}),
      make_params(Scheme::MPAC, 1024, 8, 4, 1, 2.0, {3}),
  };
  plan.t_values = {80};
  plan.num_users = 8;
  plan.texts_per_user = 2;
  plan.toylm = ToyLmParams{.model_seed = 2718, .entropy_temp = 1e4, .vocab_size = 0};
  plan.trial_seed_base = 424242;
  return plan;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("per-user seeds are stable and collision-free across tags") {
  CHECK(user_seed(1, 0, 0) == user_seed(1, 0, 0));
  CHECK(user_seed(1, 0, 0) != user_seed(1, 1, 0));
  CHECK(user_seed(1, 0, 0) != user_seed(1, 0, 1));
  CHECK(user_seed(1, 0, 0) != user_seed(2, 0, 0));
}

TEST_CASE("random messages are reproducible and have the right length") {
  const auto a = random_message(16, 5);
  const auto b = random_message(16, 5);
  CHECK(a == b);
  CHECK(a.bits.size() == 16);
  for (auto bit : a.bits) CHECK(bit <= 1);
  CHECK(random_message(16, 6) != a);
}

TEST_CASE("run_user_trial decodes its own encoding under friendly settings") {
  const auto params = make_params(Scheme::XMARK, 1024, 8, 4, 2, 1e9, {3, 99});
  const ToyLmParams toylm{.model_seed = 1, .entropy_temp = 1e5, .vocab_size = 0};
  const auto trial = run_user_trial(0, params, 256, 2, toylm, std::nullopt,
                                    MapMode::CTMM, 7);
  CHECK(trial.ba == doctest::Approx(1.0));
  CHECK(trial.exact);
  CHECK(trial.watermarked.size() == 2);
  CHECK(trial.watermarked[0].tokens.size() == 128);
  CHECK(trial.green_fraction == doctest::Approx(1.0));
  CHECK_FALSE(trial.report.undecodable);
  CHECK_FALSE(trial.clean_report.undecodable);
}

TEST_CASE("adding users never perturbs existing trials") {
  const auto params = make_params(Scheme::XMARK, 256, 8, 4, 2, 2.0, {3, 99});
  const ToyLmParams toylm{.model_seed = 5, .entropy_temp = 50.0, .vocab_size = 0};
  const auto before = run_user_trial(3, params, 60, 2, toylm, std::nullopt,
                                     MapMode::CTMM, 11);
  const auto again = run_user_trial(3, params, 60, 2, toylm, std::nullopt,
                                    MapMode::CTMM, 11);
  CHECK(before.truth == again.truth);
  CHECK(before.watermarked[0].tokens == again.watermarked[0].tokens);
  CHECK(before.report.message == again.report.message);
}

TEST_CASE("run_experiment emits one row per grid cell with sane values") {
  const auto rows = run_experiment(smoke_plan());
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.trials == 8);
    CHECK(row.total_tokens == 80);
    CHECK(row.mean_ba >= 0.0);
    CHECK(row.mean_ba <= 1.0);
    CHECK(row.mean_green_fraction > 0.0);
    CHECK_FALSE(row.attack_delta.has_value());
  }
  CHECK(rows[0].scheme == "XMARK");
  CHECK(rows[1].scheme == "MPAC");
}

TEST_CASE("reruns of a plan produce byte-identical CSV") {
  const auto plan = smoke_plan();
  const auto first = csv_to_string(run_experiment(plan));
  const auto second = csv_to_string(run_experiment(plan));
  CHECK(first == second);
}

TEST_CASE("CSV shape: fixed header, 4-decimal floats, blank delta when unattacked") {
  auto plan = smoke_plan();
  plan.num_users = 4;
  const auto rows = run_experiment(plan);
  const auto text = csv_to_string(rows);

  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  CHECK(line ==
        "scheme,b,r,d,k,bias,T,attack_delta,mean_ba,exact_match_rate,"
        "mean_green_fraction,mean_fp_watermarked,mean_fp_clean,trials");

  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto fields = split_csv_line(line);
  REQUIRE(fields.size() == 14);
  CHECK(fields[0] == "XMARK");
  CHECK(fields[1] == "8");
  CHECK(fields[5] == "2.0000");
  CHECK(fields[7].empty());  // no attack ran
  CHECK(fields[8].find('.') != std::string::npos);
  CHECK(fields[8].size() == 6);  // d.dddd
}

TEST_CASE("emit_csv writes header-only files for empty row sets") {
  const auto path = std::filesystem::temp_directory_path() / "xmark-empty.csv";
  emit_csv({}, path.string());
  std::ifstream file(path, std::ios::binary);
  std::stringstream buffer;
  buffer << file.rdbuf();
  CHECK(buffer.str() ==
        "scheme,b,r,d,k,bias,T,attack_delta,mean_ba,exact_match_rate,"
        "mean_green_fraction,mean_fp_watermarked,mean_fp_clean,trials\r\n");
  std::filesystem::remove(path);
}

TEST_CASE("CSV rows roundtrip through a parser to equal values") {
  auto plan = smoke_plan();
  plan.num_users = 4;
  plan.attacks = {AttackSpec{.kind = AttackKind::COPY_PASTE, .delta = 0.2,
                             .segment_len = 10, .attack_seed = 12}};
  const auto rows = run_experiment(plan);
  const auto text = csv_to_string(rows);

  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::size_t parsed = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    REQUIRE(fields.size() == 14);
    const auto& row = rows[parsed];
    CHECK(fields[0] == row.scheme);
    CHECK(std::stoul(fields[1]) == row.message_bits);
    CHECK(std::stoul(fields[2]) == row.num_blocks);
    CHECK(std::stoul(fields[3]) == row.block_bits);
    CHECK(std::stoul(fields[4]) == row.num_keys);
    CHECK(std::stod(fields[5]) == doctest::Approx(row.bias));
    CHECK(std::stoul(fields[6]) == row.total_tokens);
    CHECK(std::stod(fields[7]) == doctest::Approx(*row.attack_delta));
    CHECK(std::stod(fields[8]) == doctest::Approx(row.mean_ba).epsilon(1e-4));
    CHECK(std::stoul(fields[13]) == row.trials);
    ++parsed;
  }
  CHECK(parsed == rows.size());
}

TEST_CASE("attack sweeps cross the grid and tag rows with delta") {
  auto plan = smoke_plan();
  plan.params_grid.resize(1);
  plan.num_users = 4;
  plan.attacks = {
      AttackSpec{.kind = AttackKind::COPY_PASTE, .delta = 0.0, .segment_len = 10,
                 .attack_seed = 1},
      AttackSpec{.kind = AttackKind::COPY_PASTE, .delta = 0.3, .segment_len = 10,
                 .attack_seed = 1},
  };
  const auto rows = run_experiment(plan);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].attack_delta == doctest::Approx(0.0));
  CHECK(rows[1].attack_delta == doctest::Approx(0.3));
  // Interleaving clean segments can only hurt recovery.
  CHECK(rows[0].mean_ba >= rows[1].mean_ba - 0.05);
}

TEST_CASE("the default desk plan decodes nearly perfectly") {
  ExperimentPlan plan;
  plan.params_grid = {make_params(Scheme::XMARK, 1024, 8, 4, 2, 2.0, {3, 99})};
  plan.t_values = {300};
  plan.num_users = 50;
  plan.toylm = ToyLmParams{.model_seed = 1234, .entropy_temp = 1e4, .vocab_size = 0};
  plan.trial_seed_base = 555;
  const auto rows = run_experiment(plan);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_ba >= 0.99);
  CHECK(rows[0].exact_match_rate >= 0.9);
}

TEST_CASE("a zero-bias plan decodes at chance level") {
  ExperimentPlan plan;
  plan.params_grid = {make_params(Scheme::XMARK, 1024, 8, 4, 2, 0.0, {3, 99})};
  plan.t_values = {150};
  plan.num_users = 60;
  plan.toylm = ToyLmParams{.model_seed = 4321, .entropy_temp = 1e4, .vocab_size = 0};
  plan.trial_seed_base = 556;
  const auto rows = run_experiment(plan);
  REQUIRE(rows.size() == 1);
  // 60 users x 8 bits; 3 sigma of a per-bit coin plus block correlation slack.
  CHECK(std::abs(rows[0].mean_ba - 0.5) <= 0.10);
  CHECK(std::abs(rows[0].mean_green_fraction - 0.5625) <= 0.02);
}

TEST_CASE("two keys beat one at a small token budget") {
  const ToyLmParams toylm{.model_seed = 0xDECAF, .entropy_temp = 1.0,
                          .vocab_size = 0};
  const auto loso = make_params(Scheme::LOSO, 1024, 32, 16, 1, 2.0, {3});
  const auto xmark2 = make_params(Scheme::XMARK, 1024, 32, 16, 2, 2.0, {3, 99});
  const std::uint32_t users = 200;
  std::vector<double> ba_loso(users), ba_xmark(users);
  parallel_for(users, [&](std::uint32_t u) {
    ba_loso[u] = run_user_trial(u, loso, 100, 2, toylm, std::nullopt,
                                MapMode::CTMM, 808).ba;
    ba_xmark[u] = run_user_trial(u, xmark2, 100, 2, toylm, std::nullopt,
                                 MapMode::CTMM, 808).ba;
  });
  double loso_mean = 0, xmark_mean = 0;
  for (std::uint32_t u = 0; u < users; ++u) {
    loso_mean += ba_loso[u];
    xmark_mean += ba_xmark[u];
  }
  CHECK(xmark_mean / users > loso_mean / users);
}

TEST_CASE("golden CSV fixture stays frozen") {
  const auto fixture_path =
      std::filesystem::path(XMARK_TEST_DATA_DIR) / "golden_smoke.csv";
  std::ifstream file(fixture_path, std::ios::binary);
  REQUIRE(file.good());
  std::stringstream buffer;
  buffer << file.rdbuf();
  const auto rows = run_experiment(smoke_plan());
  CHECK(csv_to_string(rows) == buffer.str());
}
