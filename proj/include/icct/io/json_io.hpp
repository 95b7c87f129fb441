#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "icct/config.hpp"
#include "icct/sampler.hpp"
#include "icct/simulate.hpp"

namespace icct::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kChainFormat = "icct-chain";
inline constexpr int kChainVersion = 1;

// Unknown keys and wrong types are ValidationErrors; missing keys keep their
// defaults.
StudyConfig study_config_from_json(const Json& j);
Json to_json(const StudyConfig& config);

// Simulation request as accepted by the CLI. Cultures come either from an
// explicit list, a random generator block, or a named benchmark.
struct SimRequest {
  SimConfig config;
  int ordinal_levels = 4;  // 0 writes unit-scale values instead of ratings
};
SimRequest sim_request_from_json(const Json& j);

Json to_json(const GroundTruth& truth);
Json to_json(const FitReport& report);

// Self-describing chain container: format tag, version, full config, seed,
// ids, log-likelihood trace and every retained state.
Json chain_to_json(const PosteriorChain& chain);
PosteriorChain chain_from_json(const Json& j);

// Deterministic text form: doubles in shortest round-trip fixed notation,
// arrays on one line, LF line endings.
std::string dump(const Json& j, bool pretty = true);
Json parse_json_file(const std::filesystem::path& path);

void write_chain(const PosteriorChain& chain, const std::filesystem::path& path);
PosteriorChain read_chain(const std::filesystem::path& path);

}  // namespace icct::io
