#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "brainrf/pipeline/generator.h"
#include "brainrf/pipeline/harness.h"

namespace brainrf::io {

enum class RunMode { Irf, Rrf, Adaptive, DecodeEval, Synth };

std::string to_string(RunMode mode);
RunMode parse_run_mode(const std::string& text);

/// Segment lengths and sampling rates evaluated by decode-eval.
struct DecodeSweep {
  std::vector<double> post_ms{2000.0};
  std::vector<double> rates_hz{500.0};
};

/// Everything that determines a run's output apart from the input data.
struct RunConfig {
  RunMode mode = RunMode::Irf;
  std::uint64_t seed = 0;
  HarnessConfig harness;
  GeneratorConfig generator;
  DecodeSweep sweep;

  /// Throws ConfigError on anything the selected mode would reject.
  void validate() const;
};

/// Only the parts relevant to the mode are emitted.
nlohmann::ordered_json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::ordered_json& j);

/// Reads a run configuration file, or the configuration embedded in a report
/// summary (its "run" member). Throws ConfigError or ParseError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Parses "a,b,c" into numbers. Throws ConfigError.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace brainrf::io
