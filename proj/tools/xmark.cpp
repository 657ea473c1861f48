// xmark command-line front end: encode / decode / detect / gamma / experiment.
//
// Exit codes: 0 success, 2 parameter error, 3 undecodable input.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xmark/codec.hpp"
#include "xmark/decoder.hpp"
#include "xmark/encoder.hpp"
#include "xmark/experiment.hpp"
#include "xmark/io.hpp"
#include "xmark/shard.hpp"
#include "xmark/toylm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParameterError = 2;
constexpr int kExitUndecodable = 3;

struct EncodeArgs {
  std::string params_path;
  std::string message;
  std::string out_path;
  std::uint32_t num_tokens = 150;
  std::uint64_t sampler_seed = 1;
  std::uint64_t model_seed = 0;
  double entropy_temp = 1.0;
  double top_p = 0.0;  // 0 disables nucleus truncation
};

struct DecodeArgs {
  std::string params_path;
  std::vector<std::string> token_paths;
  std::string out_path;
  bool use_tmm = false;
};

struct DetectArgs {
  std::string report_path;
  double threshold = 0.0;
};

struct GammaArgs {
  std::uint32_t vocab_size = 1024;
  std::uint32_t block_bits = 2;
  std::uint32_t max_keys = 4;
  std::uint32_t trials = 2000;
  std::uint64_t seed = 1;
};

struct ExperimentArgs {
  std::string plan_path;
  std::string out_path;
};

int run_encode(const EncodeArgs& args) {
  const auto params = xmark::load_params(args.params_path);
  const auto message = xmark::Message::from_string(args.message);
  if (message.bits.size() != params.message_bits) {
    throw std::invalid_argument("message length does not match message_bits");
  }
  xmark::ToyLm source(xmark::ToyLmParams{.model_seed = args.model_seed,
                                         .entropy_temp = args.entropy_temp,
                                         .vocab_size = params.vocab_size});
  std::optional<double> top_p;
  if (args.top_p > 0.0) top_p = args.top_p;
  const auto result = xmark::encode(message, params, source, args.num_tokens,
                                    {0, 1}, args.sampler_seed, top_p);
  xmark::save_token_stream(result.tokens, params.vocab_size, args.out_path);
  std::printf("wrote %u tokens to %s (green fraction %.4f)\n", result.steps,
              args.out_path.c_str(),
              static_cast<double>(result.green_hits) / result.steps);
  return kExitOk;
}

int run_decode(const DecodeArgs& args) {
  const auto params = xmark::load_params(args.params_path);
  std::vector<xmark::TokenStream> streams;
  streams.reserve(args.token_paths.size());
  for (const auto& path : args.token_paths) {
    streams.push_back(xmark::load_token_stream(path));
  }
  const auto report = xmark::decode(
      streams, params, args.use_tmm ? xmark::MapMode::TMM : xmark::MapMode::CTMM);
  if (!args.out_path.empty()) {
    xmark::save_report(report, args.out_path);
  }
  std::printf("%s", xmark::report_to_json_text(report).c_str());
  return report.undecodable ? kExitUndecodable : kExitOk;
}

int run_detect(const DetectArgs& args) {
  const auto report = xmark::load_report(args.report_path);
  if (report.undecodable || report.ctmm.tokens_seen == 0) {
    std::printf("undecodable\n");
    return kExitUndecodable;
  }
  const bool watermarked = report.fp_statistic > args.threshold;
  std::printf("%s (fp_statistic %.4f vs threshold %.4f)\n",
              watermarked ? "watermarked" : "unwatermarked", report.fp_statistic,
              args.threshold);
  return kExitOk;
}

int run_gamma(const GammaArgs& args) {
  std::printf("V=%u d=%u trials=%u\n", args.vocab_size, args.block_bits,
              args.trials);
  std::printf("%4s %12s %12s %12s\n", "k", "empirical", "analytic", "std_error");
  for (std::uint32_t k = 1; k <= args.max_keys; ++k) {
    const auto est = xmark::estimate_evergreen_ratio(
        args.vocab_size, args.block_bits, k, args.trials, args.seed + k);
    std::printf("%4u %12.6f %12.6f %12.6f\n", k, est.empirical_mean,
                est.analytic, est.std_error);
  }
  return kExitOk;
}

int run_experiment_cmd(const ExperimentArgs& args) {
  auto plan = xmark::load_plan(args.plan_path);
  if (!args.out_path.empty()) plan.output_path = args.out_path;
  if (plan.output_path.empty()) {
    throw std::invalid_argument("no output path: set --out or plan output_path");
  }
  const auto rows = xmark::run_experiment(plan);
  xmark::emit_csv(rows, plan.output_path);
  std::printf("wrote %zu rows to %s\n", rows.size(), plan.output_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-wise multi-bit text watermarking toolkit"};
  app.require_subcommand(1);

  EncodeArgs encode_args;
  auto* enc = app.add_subcommand("encode", "Embed a message into a token stream");
  enc->add_option("--params", encode_args.params_path, "Parameter JSON file")
      ->required();
  enc->add_option("--message", encode_args.message, "ASCII bit-string payload")
      ->required();
  enc->add_option("--out", encode_args.out_path, "Output token file")->required();
  enc->add_option("-T,--tokens", encode_args.num_tokens, "Tokens to generate");
  enc->add_option("--seed", encode_args.sampler_seed, "Sampler stream seed");
  enc->add_option("--model-seed", encode_args.model_seed, "Toy model seed");
  enc->add_option("--entropy-temp", encode_args.entropy_temp,
                  "Toy model entropy dial (larger = flatter)");
  enc->add_option("--top-p", encode_args.top_p,
                  "Nucleus sampling mass (default off)");

  DecodeArgs decode_args;
  auto* dec = app.add_subcommand("decode", "Recover a message from token files");
  dec->add_option("--params", decode_args.params_path, "Parameter JSON file")
      ->required();
  dec->add_option("tokens", decode_args.token_paths, "Token files")
      ->required()
      ->expected(-1);
  dec->add_option("--out", decode_args.out_path, "Report JSON output path");
  dec->add_flag("--tmm", decode_args.use_tmm,
                "Use the unconstrained counting matrix");

  DetectArgs detect_args;
  auto* det = app.add_subcommand("detect", "Threshold a report's fp statistic");
  det->add_option("--report", detect_args.report_path, "Report JSON file")
      ->required();
  det->add_option("--threshold", detect_args.threshold,
                  "Decision threshold on the row-deviation statistic")
      ->required();

  GammaArgs gamma_args;
  auto* gam = app.add_subcommand(
      "gamma", "Monte-Carlo check of the expected evergreen ratio");
  gam->add_option("--vocab-size", gamma_args.vocab_size, "Vocabulary size");
  gam->add_option("-d,--block-bits", gamma_args.block_bits, "Bits per block");
  gam->add_option("-k,--max-keys", gamma_args.max_keys, "Largest key count");
  gam->add_option("--trials", gamma_args.trials, "Key tuples per k");
  gam->add_option("--seed", gamma_args.seed, "Master seed");

  ExperimentArgs experiment_args;
  auto* exp = app.add_subcommand("experiment", "Run a sweep plan to CSV");
  exp->add_option("--plan", experiment_args.plan_path, "Plan JSON file")
      ->required();
  exp->add_option("--out", experiment_args.out_path,
                  "CSV path (overrides plan output_path)");

  try {
    app.parse(argc, argv);
    if (enc->parsed()) return run_encode(encode_args);
    if (dec->parsed()) return run_decode(decode_args);
    if (det->parsed()) return run_detect(detect_args);
    if (gam->parsed()) return run_gamma(gamma_args);
    if (exp->parsed()) return run_experiment_cmd(experiment_args);
    return kExitParameterError;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitParameterError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return kExitParameterError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
