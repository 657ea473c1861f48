#pragma once

#include <string>

#include "xmark/decoder.hpp"
#include "xmark/experiment.hpp"
#include "xmark/params.hpp"

namespace xmark {

// Parameter files: flat JSON with keys vocab_size, message_bits, num_blocks,
// num_keys, bias, hash_keys (decimal 64-bit array), scheme.
WatermarkParams load_params(const std::string& path);
WatermarkParams params_from_json_text(const std::string& text);
std::string params_to_json_text(const WatermarkParams& params);
void save_params(const WatermarkParams& params, const std::string& path);

// Token files: "# xmark-tokens v1 V=<int>" header, then one decimal token id
// per line.
TokenStream load_token_stream(const std::string& path);
void save_token_stream(const TokenStream& stream, std::uint32_t vocab_size,
                       const std::string& path);

// Decode reports: JSON with bits string, counts matrix, tokens_seen,
// fp_statistic, undecodable.
std::string report_to_json_text(const DecodeReport& report);
void save_report(const DecodeReport& report, const std::string& path);
DecodeReport load_report(const std::string& path);

ExperimentPlan load_plan(const std::string& path);
ExperimentPlan plan_from_json_text(const std::string& text);

}  // namespace xmark
