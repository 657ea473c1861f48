#include "xmark/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace xmark {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw std::runtime_error("write failed: " + path);
}

json parse_json(const std::string& text, const char* what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw std::invalid_argument(std::string("malformed JSON in ") + what);
  }
  return doc;
}

WatermarkParams params_from_json(const json& doc) {
  WatermarkParams p;
  try {
    p.vocab_size = doc.at("vocab_size").get<std::uint32_t>();
    p.message_bits = doc.at("message_bits").get<std::uint32_t>();
    p.num_blocks = doc.at("num_blocks").get<std::uint32_t>();
    p.num_keys = doc.at("num_keys").get<std::uint32_t>();
    p.bias = doc.at("bias").get<double>();
    p.hash_keys = doc.at("hash_keys").get<std::vector<std::uint64_t>>();
    p.scheme = parse_scheme(doc.at("scheme").get<std::string>());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad parameter document: ") + e.what());
  }
  p.block_bits = p.num_blocks == 0 ? 0 : p.message_bits / p.num_blocks;
  p.validate();
  return p;
}

AttackSpec attack_from_json(const json& doc) {
  AttackSpec spec;
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "COPY_PASTE") {
      spec.kind = AttackKind::COPY_PASTE;
    } else if (kind == "SUBSTITUTE") {
      spec.kind = AttackKind::SUBSTITUTE;
    } else {
      throw std::invalid_argument("unknown attack kind: " + kind);
    }
    spec.delta = doc.at("delta").get<double>();
    if (doc.contains("segment_len")) {
      spec.segment_len = doc.at("segment_len").get<std::uint32_t>();
    }
    if (doc.contains("attack_seed")) {
      spec.attack_seed = doc.at("attack_seed").get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad attack document: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace

WatermarkParams params_from_json_text(const std::string& text) {
  return params_from_json(parse_json(text, "parameter file"));
}

WatermarkParams load_params(const std::string& path) {
  return params_from_json_text(read_file(path));
}

std::string params_to_json_text(const WatermarkParams& params) {
  params.validate();
  json doc;
  doc["vocab_size"] = params.vocab_size;
  doc["message_bits"] = params.message_bits;
  doc["num_blocks"] = params.num_blocks;
  doc["num_keys"] = params.num_keys;
  doc["bias"] = params.bias;
  doc["hash_keys"] = params.hash_keys;
  doc["scheme"] = std::string(scheme_name(params.scheme));
  return doc.dump(2) + "\n";
}

void save_params(const WatermarkParams& params, const std::string& path) {
  write_file(path, params_to_json_text(params));
}

TokenStream load_token_stream(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot open file: " + path);
  std::string header;
  if (!std::getline(file, header)) {
    throw std::invalid_argument("empty token file: " + path);
  }
  constexpr std::string_view prefix = "# xmark-tokens v1 V=";
  if (header.rfind(prefix, 0) != 0) {
    throw std::invalid_argument("bad token file header: " + path);
  }
  std::uint64_t vocab_size = 0;
  try {
    vocab_size = std::stoull(header.substr(prefix.size()));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad vocab size in token file header: " + path);
  }

  TokenStream stream;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    std::uint64_t value = 0;
    try {
      value = std::stoull(line);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad token id in " + path + ": " + line);
    }
    if (value >= vocab_size) {
      throw std::invalid_argument("token id out of range in " + path);
    }
    stream.tokens.push_back(static_cast<std::uint32_t>(value));
  }
  return stream;
}

void save_token_stream(const TokenStream& stream, std::uint32_t vocab_size,
                       const std::string& path) {
  std::string text = "# xmark-tokens v1 V=" + std::to_string(vocab_size) + "\n";
  for (auto token : stream.tokens) {
    if (token >= vocab_size) {
      throw std::invalid_argument("token id exceeds vocab_size");
    }
    text += std::to_string(token);
    text += '\n';
  }
  write_file(path, text);
}

std::string report_to_json_text(const DecodeReport& report) {
  json doc;
  doc["bits"] = report.message.to_string();
  json counts = json::array();
  for (std::uint32_t i = 0; i < report.ctmm.num_blocks; ++i) {
    json row = json::array();
    for (auto v : report.ctmm.row(i)) row.push_back(v);
    counts.push_back(std::move(row));
  }
  doc["counts"] = std::move(counts);
  doc["tokens_seen"] = report.ctmm.tokens_seen;
  doc["fp_statistic"] = report.fp_statistic;
  doc["undecodable"] = report.undecodable;
  return doc.dump(2) + "\n";
}

void save_report(const DecodeReport& report, const std::string& path) {
  write_file(path, report_to_json_text(report));
}

DecodeReport load_report(const std::string& path) {
  const json doc = parse_json(read_file(path), "report file");
  DecodeReport report;
  try {
    report.message = Message::from_string(doc.at("bits").get<std::string>());
    const auto& counts = doc.at("counts");
    report.ctmm.num_blocks = static_cast<std::uint32_t>(counts.size());
    for (const auto& row : counts) {
      report.ctmm.num_shards = static_cast<std::uint32_t>(row.size());
      for (const auto& v : row) {
        report.ctmm.counts.push_back(v.get<std::uint64_t>());
      }
    }
    report.ctmm.tokens_seen = doc.at("tokens_seen").get<std::uint64_t>();
    report.fp_statistic = doc.at("fp_statistic").get<double>();
    report.undecodable = doc.at("undecodable").get<bool>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad report document: ") + e.what());
  }
  return report;
}

ExperimentPlan plan_from_json_text(const std::string& text) {
  const json doc = parse_json(text, "plan file");
  ExperimentPlan plan;
  try {
    for (const auto& p : doc.at("params_grid")) {
      plan.params_grid.push_back(params_from_json(p));
    }
    plan.t_values = doc.at("T_values").get<std::vector<std::uint32_t>>();
    if (doc.contains("num_users")) {
      plan.num_users = doc.at("num_users").get<std::uint32_t>();
    }
    if (doc.contains("texts_per_user")) {
      plan.texts_per_user = doc.at("texts_per_user").get<std::uint32_t>();
    }
    const auto& lm = doc.at("toylm");
    plan.toylm.model_seed = lm.at("model_seed").get<std::uint64_t>();
    plan.toylm.entropy_temp = lm.at("entropy_temp").get<double>();
    if (doc.contains("attacks")) {
      for (const auto& a : doc.at("attacks")) {
        plan.attacks.push_back(attack_from_json(a));
      }
    }
    if (doc.contains("decode_mode")) {
      const auto mode = doc.at("decode_mode").get<std::string>();
      if (mode == "CTMM") {
        plan.decode_mode = MapMode::CTMM;
      } else if (mode == "TMM") {
        plan.decode_mode = MapMode::TMM;
      } else {
        throw std::invalid_argument("unknown decode_mode: " + mode);
      }
    }
    if (doc.contains("trial_seed_base")) {
      plan.trial_seed_base = doc.at("trial_seed_base").get<std::uint64_t>();
    }
    if (doc.contains("output_path")) {
      plan.output_path = doc.at("output_path").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad plan document: ") + e.what());
  }
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  return plan_from_json_text(read_file(path));
}

}  // namespace xmark
