#pragma once

#include <json.hpp>

#include "brainrf/pipeline/generator.h"
#include "brainrf/pipeline/harness.h"

namespace brainrf {

// JSON forms of the configuration structs. Parsing fills absent fields with
// defaults and rejects unknown fields with ConfigError.

nlohmann::ordered_json to_json(const CombinationWeights& w);
nlohmann::ordered_json to_json(const SynthesisParams& p);
nlohmann::ordered_json to_json(const DecodingConfig& c);
nlohmann::ordered_json to_json(const HarnessConfig& c);
nlohmann::ordered_json to_json(const GeneratorConfig& c);

CombinationWeights weights_from_json(const nlohmann::ordered_json& j);
SynthesisParams synthesis_from_json(const nlohmann::ordered_json& j);
DecodingConfig decoding_from_json(const nlohmann::ordered_json& j);
HarnessConfig harness_from_json(const nlohmann::ordered_json& j);
GeneratorConfig generator_from_json(const nlohmann::ordered_json& j);

}  // namespace brainrf
