#include "randapprox/config.hpp"

#include <fstream>
#include <sstream>

#include "randapprox/randmodel.hpp"

namespace randapprox {

namespace {

std::vector<Rat> params_from_json(const Json& j) {
    if (!j.is_array()) throw ConfigError("params must be an array of rational strings");
    std::vector<Rat> out;
    for (const auto& item : j) {
        if (!item.is_string()) throw ConfigError("numeric parameters must be strings");
        out.push_back(parse_rational(item.get<std::string>()));
    }
    return out;
}

Json params_to_json(const std::vector<Rat>& params) {
    Json out = Json::array();
    for (const Rat& r : params) out.push_back(rat_to_string(r));
    return out;
}

std::uint64_t u64_field(const Json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing config key: ") + key);
    const Json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(std::string("config key must be a string: ") + key);
    const Rat r = parse_rational(v.get<std::string>());
    if (rat_den(r) != 1 || rat_num(r) < 0) throw ConfigError(std::string("expected a non-negative integer: ") + key);
    return rat_num(r).convert_to<std::uint64_t>();
}

Rat rat_field(const Json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing config key: ") + key);
    const Json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(std::string("config key must be a string: ") + key);
    return parse_rational(v.get<std::string>());
}

}  // namespace

Json psi_spec_to_json(const PsiSpec& spec) {
    Json j;
    j["family"] = family_name(spec.family);
    j["params"] = params_to_json(spec.params);
    if (spec.clamp_quarter) j["clamp_quarter"] = true;
    return j;
}

PsiSpec psi_spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family") || !j.contains("params"))
        throw ConfigError("spec needs {family, params}");
    PsiSpec spec;
    spec.family = psi_family_from_name(j.at("family").get<std::string>());
    spec.params = params_from_json(j.at("params"));
    spec.clamp_quarter = j.value("clamp_quarter", false);
    spec.validate();
    return spec;
}

Json prob_spec_to_json(const ProbSpec& spec) {
    Json j;
    j["family"] = family_name(spec.family);
    j["params"] = params_to_json(spec.params);
    return j;
}

ProbSpec prob_spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family") || !j.contains("params"))
        throw ConfigError("spec needs {family, params}");
    ProbSpec spec;
    spec.family = prob_family_from_name(j.at("family").get<std::string>());
    spec.params = params_from_json(j.at("params"));
    spec.validate();
    return spec;
}

Json config_to_json(const ExperimentConfig& cfg) {
    Json j;
    j["seed"] = std::to_string(cfg.seed);
    j["epsilon"] = rat_to_string(cfg.epsilon);
    j["psi"] = psi_spec_to_json(cfg.psi);
    j["p"] = prob_spec_to_json(cfg.p);
    j["window"] = Json::array({std::to_string(cfg.window_lo), std::to_string(cfg.window_hi)});
    j["grid"] = std::to_string(cfg.grid);
    j["partition"] = std::to_string(cfg.partition);
    j["exact_bound"] = std::to_string(cfg.exact_bound);
    j["trials"] = std::to_string(cfg.trials);
    j["t_max"] = std::to_string(cfg.t_max);
    j["n_max"] = std::to_string(cfg.n_max);
    j["tail_bound_max"] = rat_to_string(cfg.tail_bound_max);
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.seed = u64_field(j, "seed");
    cfg.epsilon = rat_field(j, "epsilon");
    if (!j.contains("psi") || !j.contains("p")) throw ConfigError("config needs psi and p specs");
    cfg.psi = psi_spec_from_json(j.at("psi"));
    cfg.p = prob_spec_from_json(j.at("p"));
    if (!j.contains("window") || !j.at("window").is_array() || j.at("window").size() != 2)
        throw ConfigError("config needs window: [N0, N1]");
    cfg.window_lo = u64_field(Json{{"w", j.at("window")[0]}}, "w");
    cfg.window_hi = u64_field(Json{{"w", j.at("window")[1]}}, "w");
    cfg.grid = u64_field(j, "grid");
    cfg.partition = static_cast<std::uint32_t>(u64_field(j, "partition"));
    cfg.exact_bound = u64_field(j, "exact_bound");
    cfg.trials = u64_field(j, "trials");
    cfg.t_max = u64_field(j, "t_max");
    if (j.contains("n_max")) cfg.n_max = u64_field(j, "n_max");
    if (j.contains("tail_bound_max")) cfg.tail_bound_max = rat_field(j, "tail_bound_max");
    cfg.validate();
    return cfg;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot write file: " + path);
    out << body;
}

Arc arc_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigError("arc must be [lo, hi]");
    const Rat lo = parse_rational(j[0].get<std::string>());
    const Rat hi = parse_rational(j[1].get<std::string>());
    return Arc::half(lo, hi);
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& cfg) {
    const std::uint64_t h = fnv1a64(canonical_dump(config_to_json(cfg)));
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

Json RunManifest::to_json() const {
    Json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    j["prf_version"] = kPrfVersion;
    j["seed"] = std::to_string(seed);
    j["config_hash"] = hash;
    j["config"] = config;
    j["frozen_thresholds"] = frozen;
    j["started"] = started;
    j["finished"] = finished;
    return j;
}

}  // namespace randapprox
