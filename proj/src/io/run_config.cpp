#include "brainrf/io/run_config.h"

#include <fstream>
#include <sstream>

#include "brainrf/core/error.h"
#include "brainrf/pipeline/config_json.h"

namespace brainrf::io {

using Json = nlohmann::ordered_json;

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Irf: return "run-irf";
    case RunMode::Rrf: return "run-rrf";
    case RunMode::Adaptive: return "run-adaptive";
    case RunMode::DecodeEval: return "decode-eval";
    case RunMode::Synth: return "synth";
  }
  return "run-irf";
}

RunMode parse_run_mode(const std::string& text) {
  for (RunMode m : {RunMode::Irf, RunMode::Rrf, RunMode::Adaptive, RunMode::DecodeEval, RunMode::Synth}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("unknown mode '" + text + "'");
}

void RunConfig::validate() const {
  switch (mode) {
    case RunMode::Synth: generator.validate(); break;
    case RunMode::DecodeEval:
      if (sweep.post_ms.empty() || sweep.rates_hz.empty()) throw ConfigError("decode-eval needs at least one window and rate");
      for (double v : sweep.post_ms) {
        if (!(v > 0.0)) throw ConfigError("segment lengths must be positive");
      }
      for (double v : sweep.rates_hz) {
        if (!(v >= 100.0)) throw ConfigError("sampling rates must be at least 100 Hz");
      }
      break;
    default: harness.validate(); break;
  }
}

Json to_json(const RunConfig& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["seed"] = c.seed;
  if (c.mode == RunMode::Synth) {
    j["generator"] = to_json(c.generator);
  } else if (c.mode == RunMode::DecodeEval) {
    j["decoding"] = to_json(c.harness.decoding);
    j["sweep"] = {{"post_ms", c.sweep.post_ms}, {"rates_hz", c.sweep.rates_hz}};
  } else {
    j["harness"] = to_json(c.harness);
  }
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("run configuration must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "mode") {
        c.mode = parse_run_mode(value.get<std::string>());
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "harness") {
        c.harness = harness_from_json(value);
      } else if (key == "generator") {
        c.generator = generator_from_json(value);
      } else if (key == "decoding") {
        c.harness.decoding = decoding_from_json(value);
      } else if (key == "sweep") {
        if (value.contains("post_ms")) c.sweep.post_ms = value.at("post_ms").get<std::vector<double>>();
        if (value.contains("rates_hz")) c.sweep.rates_hz = value.at("rates_hz").get<std::vector<double>>();
      } else {
        throw ConfigError("unknown field '" + key + "' in run configuration");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("run configuration field '" + key + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  if (j.is_object() && j.contains("run") && j.contains("fingerprint")) return run_config_from_json(j.at("run"));
  return run_config_from_json(j);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "' in '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

}  // namespace brainrf::io
