#pragma once

#include <string>

#include <json.hpp>

#include "randapprox/experiments.hpp"
#include "randapprox/rational.hpp"
#include "randapprox/sequences.hpp"

namespace randapprox {

inline constexpr const char* kToolVersion = "0.1.0";

// Configs are JSON with every numeric parameter carried as a string parsed
// exactly ("num/den" rationals, plain integers), so no locale or float
// ambiguity can creep into a manifest.
using Json = nlohmann::ordered_json;

Json psi_spec_to_json(const PsiSpec& spec);
PsiSpec psi_spec_from_json(const Json& j);
Json prob_spec_to_json(const ProbSpec& spec);
ProbSpec prob_spec_from_json(const Json& j);

Json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& body);

// Optional arc key "arc": ["lo", "hi"] (half-open), default [0, 1).
Arc arc_from_json(const Json& j);

std::string canonical_dump(const Json& j);

// FNV-1a over the canonical dump, as fixed-width hex.
std::string config_hash(const ExperimentConfig& cfg);

struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::string hash;
    Json config;
    Json frozen;  // thresholds in force, or null
    std::string started;
    std::string finished;

    Json to_json() const;
};

}  // namespace randapprox
