// Copyright 2026 The fluxqit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run configuration: one JSON document, angular frequencies only.
//
//   {
//     "units": "angular",
//     "fock_cutoff": 2,
//     "device": {
//       "resonator": {"omega_c": 5.0e10},
//       "qubit_a": {"g": 3.0e9, "omega01": 2.0e10},
//       "qubit_b": {"g": 3.0e9, "omega01": 2.25e10}
//     },
//     "protocol": {"detuning_over_g_a": 10, "detuning_over_g_b": 10, "rabi_tilde_over_g_a": 10},
//     "integrator": {"dt": 0, "norm_tolerance": 1e-9},
//     "sweep": {"variable": "rabi_over_s", "grid": "1:10:1"},
//     "seed": 20240601,
//     "mc_samples": 100000,
//     "output_path": ""
//   }
//
// A qubit may instead give "omega02" and "omega12" directly, in which case
// its detuning ratio must not also be set. "rabi_tilde" (rad/s) may replace
// "rabi_tilde_over_g_a". Unknown keys are rejected.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluxqit/errors.hpp"
#include "fluxqit/hilbert.hpp"
#include "fluxqit/model.hpp"
#include "fluxqit/propagator.hpp"
#include "fluxqit/protocol.hpp"

namespace fluxqit {

/// Strictly increasing grid parsed from "start:stop:step".
struct Grid {
    std::vector<double> values;

    static Grid parse(const std::string& text) {
        std::vector<double> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) {
            try {
                std::size_t used = 0;
                parts.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw ConfigurationError("grid '" + text + "': '" + item + "' is not a number");
            }
        }
        if (parts.size() != 3) throw ConfigurationError("grid '" + text + "' must be start:stop:step");
        const double start = parts[0], stop = parts[1], step = parts[2];
        if (!(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step)) || !(step > 0.0) ||
            !(stop >= start)) {
            throw ConfigurationError("grid '" + text + "' must be finite with step > 0 and stop >= start");
        }
        Grid g;
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) g.values.push_back(start + step * static_cast<double>(k));
        return g;
    }
};

struct Sweep {
    std::string variable = "rabi_over_s";
    Grid grid;
};

struct RunConfig {
    int fock_cutoff = 2;
    QubitParams qubit_a{};
    QubitParams qubit_b{};
    ResonatorParams resonator{};
    double rabi_tilde = 0.0;
    IntegratorConfig integrator{};
    std::optional<Sweep> sweep;
    std::uint64_t seed = 20240601;
    std::size_t mc_samples = 100000;
    std::string output_path;
    /// Worker threads for sampling; does not change any output.
    unsigned threads = 1;

    SpaceConfig space() const { return SpaceConfig(fock_cutoff); }
    Schedule schedule() const { return build_schedule(qubit_a, qubit_b, resonator, rabi_tilde, space()); }
};

namespace detail {

using Json = nlohmann::json;

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigurationError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ConfigurationError("unknown key '" + key + "' in " + where);
    }
}

inline double positive(const Json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigurationError("missing '" + key + "' in " + where);
    if (!j.at(key).is_number()) throw ConfigurationError("'" + key + "' in " + where + " must be a number");
    const double v = j.at(key).get<double>();
    if (!(std::isfinite(v) && v > 0.0)) {
        throw ConfigurationError("'" + key + "' in " + where + " must be finite and > 0");
    }
    return v;
}

inline double number_or(const Json& j, const std::string& key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigurationError("'" + key + "' in " + where + " must be a number");
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigurationError("'" + key + "' in " + where + " must be finite");
    return v;
}

}  // namespace detail

/// Device and protocol values used when the configuration omits them:
/// g = 3.0e9 rad/s on both qubits, Dc = Duw = 10 g, rabi = g on the Raman
/// steps, rabi_tilde = 10 g.
inline nlohmann::json default_config_json() {
    return {
        {"units", "angular"},
        {"fock_cutoff", 2},
        {"device",
         {{"resonator", {{"omega_c", 5.0e10}}},
          {"qubit_a", {{"g", 3.0e9}, {"omega01", 2.0e10}}},
          {"qubit_b", {{"g", 3.0e9}, {"omega01", 2.25e10}}}}},
        {"protocol", {{"detuning_over_g_a", 10.0}, {"detuning_over_g_b", 10.0}, {"rabi_tilde_over_g_a", 10.0}}},
        {"integrator", {{"dt", 0.0}, {"norm_tolerance", 1e-9}}},
        {"seed", 20240601},
        {"mc_samples", 100000},
        {"output_path", ""},
    };
}

namespace detail {

inline std::uint64_t non_negative_integer(const Json& v, const char* key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigurationError(std::string(key) + " must be a non-negative integer");
}

inline RunConfig parse_config_document(const nlohmann::json& doc) {
    detail::reject_unknown(doc, {"units", "fock_cutoff", "device", "protocol", "integrator", "sweep", "seed",
                                 "mc_samples", "output_path"},
                           "config");
    const Json defaults = default_config_json();
    const auto section = [&](const char* key) -> Json { return doc.contains(key) ? doc.at(key) : defaults.at(key); };

    const std::string units = doc.value("units", std::string("angular"));
    if (units != "angular") {
        throw ConfigurationError("units must be \"angular\" (rad/s); got \"" + units + "\"");
    }

    RunConfig cfg;
    if (doc.contains("fock_cutoff")) {
        if (!doc.at("fock_cutoff").is_number_integer()) throw ConfigurationError("fock_cutoff must be an integer");
        cfg.fock_cutoff = doc.at("fock_cutoff").get<int>();
    }
    (void)SpaceConfig(cfg.fock_cutoff);

    const Json device = section("device");
    detail::reject_unknown(device, {"resonator", "qubit_a", "qubit_b"}, "device");
    const Json resonator = device.value("resonator", defaults["device"]["resonator"]);
    detail::reject_unknown(resonator, {"omega_c"}, "device.resonator");
    cfg.resonator.omega_c = detail::positive(resonator, "omega_c", "device.resonator");

    const Json protocol = section("protocol");
    detail::reject_unknown(protocol,
                           {"detuning_over_g_a", "detuning_over_g_b", "rabi_tilde_over_g_a", "rabi_tilde"},
                           "protocol");

    const auto qubit = [&](const char* key, const char* ratio_key, QubitLabel label) {
        const Json q = device.value(key, defaults["device"][key]);
        const std::string where = std::string("device.") + key;
        detail::reject_unknown(q, {"g", "omega01", "omega02", "omega12"}, where);
        QubitParams p;
        p.label = label;
        p.g = detail::positive(q, "g", where);
        if (q.contains("omega02") || q.contains("omega12")) {
            if (q.contains("omega01")) throw ConfigurationError(where + ": give omega01 or omega02/omega12, not both");
            if (protocol.contains(ratio_key)) {
                throw ConfigurationError(where + " sets omega02 directly; drop protocol." + ratio_key);
            }
            p.omega02 = detail::positive(q, "omega02", where);
            p.omega12 = detail::positive(q, "omega12", where);
        } else {
            const double ratio = protocol.contains(ratio_key) ? detail::positive(protocol, ratio_key, "protocol")
                                                              : defaults["protocol"][ratio_key].get<double>();
            const double omega01 = detail::positive(q, "omega01", where);
            p.omega02 = cfg.resonator.omega_c + ratio * p.g;
            p.omega12 = p.omega02 - omega01;
        }
        p.validate();
        return p;
    };
    cfg.qubit_a = qubit("qubit_a", "detuning_over_g_a", QubitLabel::a);
    cfg.qubit_b = qubit("qubit_b", "detuning_over_g_b", QubitLabel::b);

    if (protocol.contains("rabi_tilde")) {
        if (protocol.contains("rabi_tilde_over_g_a")) {
            throw ConfigurationError("protocol: give rabi_tilde or rabi_tilde_over_g_a, not both");
        }
        cfg.rabi_tilde = detail::positive(protocol, "rabi_tilde", "protocol");
    } else {
        const double ratio = protocol.contains("rabi_tilde_over_g_a")
                                 ? detail::positive(protocol, "rabi_tilde_over_g_a", "protocol")
                                 : defaults["protocol"]["rabi_tilde_over_g_a"].get<double>();
        cfg.rabi_tilde = ratio * cfg.qubit_a.g;
    }

    const Json integrator = section("integrator");
    detail::reject_unknown(integrator, {"dt", "norm_tolerance", "method"}, "integrator");
    cfg.integrator.dt = detail::number_or(integrator, "dt", 0.0, "integrator");
    cfg.integrator.norm_tolerance = detail::number_or(integrator, "norm_tolerance", 1e-9, "integrator");
    if (cfg.integrator.dt < 0.0 || !(cfg.integrator.norm_tolerance > 0.0)) {
        throw ConfigurationError("integrator: dt must be >= 0 and norm_tolerance > 0");
    }
    if (integrator.contains("method") && integrator.at("method") != "rk4") {
        throw ConfigurationError("integrator.method: only \"rk4\" drives the full engine");
    }

    if (doc.contains("sweep")) {
        const Json& sweep = doc.at("sweep");
        detail::reject_unknown(sweep, {"variable", "grid"}, "sweep");
        Sweep s;
        s.variable = sweep.value("variable", std::string("rabi_over_s"));
        if (s.variable != "rabi_over_s") throw ConfigurationError("sweep.variable must be \"rabi_over_s\"");
        if (!sweep.contains("grid") || !sweep.at("grid").is_string()) {
            throw ConfigurationError("sweep.grid must be a \"start:stop:step\" string");
        }
        s.grid = Grid::parse(sweep.at("grid").get<std::string>());
        cfg.sweep = s;
    }

    if (doc.contains("seed")) cfg.seed = detail::non_negative_integer(doc.at("seed"), "seed");
    if (doc.contains("mc_samples")) {
        cfg.mc_samples = detail::non_negative_integer(doc.at("mc_samples"), "mc_samples");
        if (cfg.mc_samples == 0) throw ConfigurationError("mc_samples must be positive");
    }
    if (doc.contains("output_path")) {
        if (!doc.at("output_path").is_string()) throw ConfigurationError("output_path must be a string");
        cfg.output_path = doc.at("output_path").get<std::string>();
    }
    return cfg;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& doc) {
    try {
        return detail::parse_config_document(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("malformed config: ") + e.what());
    }
}

inline RunConfig default_config() { return parse_config(default_config_json()); }

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

}  // namespace fluxqit
