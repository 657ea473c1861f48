#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

#include "xmark/io.hpp"

using namespace xmark;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("xmark-io-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

WatermarkParams sample_params() {
  return make_params(Scheme::XMARK, 1024, 8, 4, 2, 2.0, {3, 99});
}

}  // namespace

TEST_CASE("params roundtrip through JSON") {
  TempDir dir;
  const auto params = sample_params();
  save_params(params, dir.file("params.json"));
  const auto loaded = load_params(dir.file("params.json"));
  CHECK(loaded.vocab_size == params.vocab_size);
  CHECK(loaded.message_bits == params.message_bits);
  CHECK(loaded.num_blocks == params.num_blocks);
  CHECK(loaded.block_bits == 2);
  CHECK(loaded.num_keys == params.num_keys);
  CHECK(loaded.bias == params.bias);
  CHECK(loaded.hash_keys == params.hash_keys);
  CHECK(loaded.scheme == params.scheme);
}

TEST_CASE("params JSON keeps full 64-bit keys") {
  const auto text = params_from_json_text(
      R"({"vocab_size":16,"message_bits":4,"num_blocks":2,"num_keys":1,
          "bias":0.5,"hash_keys":[18446744073709551615],"scheme":"LOSO"})");
  CHECK(text.hash_keys[0] == 0xFFFFFFFFFFFFFFFFull);
}

TEST_CASE("malformed or invalid params are parameter errors") {
  CHECK_THROWS_AS(params_from_json_text("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(params_from_json_text("{}"), std::invalid_argument);
  // k=2 under MPAC violates the scheme invariant.
  CHECK_THROWS_AS(params_from_json_text(
                      R"({"vocab_size":16,"message_bits":4,"num_blocks":2,
                          "num_keys":2,"bias":0.5,"hash_keys":[1,2],
                          "scheme":"MPAC"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(load_params("/nonexistent/params.json"), std::invalid_argument);
}

TEST_CASE("token streams roundtrip through the line format") {
  TempDir dir;
  TokenStream stream;
  stream.tokens = {0, 5, 1023, 17};
  save_token_stream(stream, 1024, dir.file("tokens.txt"));

  std::ifstream file(dir.file("tokens.txt"));
  std::string header;
  std::getline(file, header);
  CHECK(header == "# xmark-tokens v1 V=1024");

  const auto loaded = load_token_stream(dir.file("tokens.txt"));
  CHECK(loaded.tokens == stream.tokens);
}

TEST_CASE("token files reject bad headers and out-of-range ids") {
  TempDir dir;
  {
    std::ofstream f(dir.file("bad.txt"));
    f << "tokens here\n5\n";
  }
  CHECK_THROWS_AS(load_token_stream(dir.file("bad.txt")), std::invalid_argument);
  {
    std::ofstream f(dir.file("range.txt"));
    f << "# xmark-tokens v1 V=16\n99\n";
  }
  CHECK_THROWS_AS(load_token_stream(dir.file("range.txt")), std::invalid_argument);
  TokenStream stream;
  stream.tokens = {20};
  CHECK_THROWS_AS(save_token_stream(stream, 16, dir.file("overflow.txt")),
                  std::invalid_argument);
}

TEST_CASE("reports roundtrip through JSON") {
  TempDir dir;
  DecodeReport report;
  report.message = Message::from_string("0110");
  report.ctmm = Ctmm(2, 4);
  report.ctmm.counts = {1, 2, 3, 4, 5, 6, 7, 8};
  report.ctmm.tokens_seen = 12;
  report.fp_statistic = 1.25;
  save_report(report, dir.file("report.json"));
  const auto loaded = load_report(dir.file("report.json"));
  CHECK(loaded.message == report.message);
  CHECK(loaded.ctmm.counts == report.ctmm.counts);
  CHECK(loaded.ctmm.tokens_seen == 12);
  CHECK(loaded.fp_statistic == doctest::Approx(1.25));
  CHECK_FALSE(loaded.undecodable);
}

TEST_CASE("plans parse with defaults and validate") {
  const auto plan = plan_from_json_text(R"({
    "params_grid": [{"vocab_size":1024,"message_bits":8,"num_blocks":4,
                     "num_keys":2,"bias":2.0,"hash_keys":[3,99],"scheme":"XMARK"}],
    "T_values": [100, 150],
    "num_users": 5,
    "toylm": {"model_seed": 11, "entropy_temp": 100.0},
    "attacks": [{"kind":"COPY_PASTE","delta":0.2,"segment_len":10,"attack_seed":1}],
    "trial_seed_base": 42
  })");
  CHECK(plan.params_grid.size() == 1);
  CHECK(plan.t_values == std::vector<std::uint32_t>{100, 150});
  CHECK(plan.num_users == 5);
  CHECK(plan.texts_per_user == 2);
  CHECK(plan.decode_mode == MapMode::CTMM);
  CHECK(plan.attacks.size() == 1);
  CHECK(plan.attacks[0].delta == doctest::Approx(0.2));

  // Odd T with two texts per user breaks the protocol invariant.
  CHECK_THROWS_AS(plan_from_json_text(R"({
    "params_grid": [{"vocab_size":1024,"message_bits":8,"num_blocks":4,
                     "num_keys":2,"bias":2.0,"hash_keys":[3,99],"scheme":"XMARK"}],
    "T_values": [101],
    "toylm": {"model_seed": 11, "entropy_temp": 100.0}
  })"), std::invalid_argument);
}
