// config.hpp
// JSON scenario configuration: one self-describing document per run, with
// defaults filled in and every invariant checked at parse time. Violations
// raise ParseError naming the offending field.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qst/transfer.hpp"

namespace qst {

enum class Scenario { transfer, pulses, symmetrize, antisymmetrize, qss, distribute };

inline const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::transfer: return "transfer";
        case Scenario::pulses: return "pulses";
        case Scenario::symmetrize: return "symmetrize";
        case Scenario::antisymmetrize: return "antisymmetrize";
        case Scenario::qss: return "qss";
        case Scenario::distribute: return "distribute";
    }
    return "?";
}

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::transfer;
    ChannelParams params;                 // transfer / pulses / distribute
    std::array<cplx, 3> chi{};            // qss secret
    std::uint64_t seed = 0;
    std::string output_path;
};

namespace detail_config {

inline bool uses_channel(Scenario s) {
    return s == Scenario::transfer || s == Scenario::pulses || s == Scenario::distribute;
}

inline double require_number(const nlohmann::json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

}  // namespace detail_config

// Parse and validate one scenario document. Defaults: kappa=1,
// lambda0=kappa/sqrt(2), t_max=10/kappa, dt=0.005/kappa, seed=0,
// chi=(1,1,1)/sqrt(3), output_path=<scenario name>.{json|csv}.
inline ScenarioConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config must be a JSON object");

    if (!doc.contains("scenario")) throw ParseError("missing required field 'scenario'");
    if (!doc.at("scenario").is_string()) throw ParseError("field 'scenario' must be a string");
    const std::string name = doc.at("scenario").get<std::string>();

    ScenarioConfig cfg;
    if (name == "transfer") cfg.scenario = Scenario::transfer;
    else if (name == "pulses") cfg.scenario = Scenario::pulses;
    else if (name == "symmetrize") cfg.scenario = Scenario::symmetrize;
    else if (name == "antisymmetrize") cfg.scenario = Scenario::antisymmetrize;
    else if (name == "qss") cfg.scenario = Scenario::qss;
    else if (name == "distribute") cfg.scenario = Scenario::distribute;
    else throw ParseError("unknown scenario '" + name + "'");

    std::set<std::string> allowed{"scenario", "seed", "output_path"};
    if (detail_config::uses_channel(cfg.scenario)) {
        allowed.insert({"kappa", "lambda0", "t_max", "dt"});
    }
    if (cfg.scenario == Scenario::qss) allowed.insert("chi");
    for (const auto& item : doc.items()) {
        if (!allowed.count(item.key())) {
            throw ParseError("unknown field '" + item.key() + "' for scenario '" + name + "'");
        }
    }

    if (doc.contains("seed")) {
        const auto& v = doc.at("seed");
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ParseError("field 'seed' must be a non-negative integer");
        }
        cfg.seed = v.get<std::uint64_t>();
    }

    if (detail_config::uses_channel(cfg.scenario)) {
        const double kappa = detail_config::require_number(doc, "kappa", 1.0);
        if (!(kappa > 0.0)) throw ParseError("field 'kappa' must be positive");
        const double lambda0 = detail_config::require_number(doc, "lambda0", kappa / k_sqrt2);
        if (!(lambda0 > 0.0)) throw ParseError("field 'lambda0' must be positive");
        const double t_max = detail_config::require_number(doc, "t_max", 10.0 / kappa);
        if (!(t_max > 0.0)) throw ParseError("field 't_max' must be positive");
        const double dt = detail_config::require_number(doc, "dt", 0.005 / kappa);
        if (!(dt > 0.0) || dt > t_max / 100.0) {
            throw ParseError("field 'dt' must satisfy 0 < dt <= t_max/100");
        }
        const double steps = t_max / dt;
        if (std::abs(steps - std::llround(steps)) > 1e-9 * steps) {
            throw ParseError("field 'dt' must divide t_max into whole steps");
        }
        cfg.params = ChannelParams{kappa, lambda0, t_max, dt};
    }

    cfg.chi = {k_inv_sqrt3, k_inv_sqrt3, k_inv_sqrt3};
    if (cfg.scenario == Scenario::qss && doc.contains("chi")) {
        const auto& v = doc.at("chi");
        if (!v.is_array() || v.size() != 3) {
            throw ParseError("field 'chi' must be an array of three [re, im] pairs");
        }
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& pair = v.at(i);
            if (!pair.is_array() || pair.size() != 2 || !pair.at(0).is_number() || !pair.at(1).is_number()) {
                throw ParseError("field 'chi' must be an array of three [re, im] pairs");
            }
            cfg.chi[i] = {pair.at(0).get<double>(), pair.at(1).get<double>()};
            norm_sq += std::norm(cfg.chi[i]);
        }
        if (std::abs(norm_sq - 1.0) > 1e-10) throw ParseError("field 'chi' must be normalized");
    }

    if (doc.contains("output_path")) {
        const auto& v = doc.at("output_path");
        if (!v.is_string() || v.get<std::string>().empty()) {
            throw ParseError("field 'output_path' must be a non-empty string");
        }
        cfg.output_path = v.get<std::string>();
    } else {
        cfg.output_path = std::string(name) + (cfg.scenario == Scenario::pulses ? ".csv" : ".json");
    }
    return cfg;
}

}  // namespace qst
