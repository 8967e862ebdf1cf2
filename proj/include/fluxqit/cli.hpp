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

// Subcommands behind tools/fluxqit. Each writes its artifact to a stream and
// returns the process exit code: 0 success, 1 threshold failure, 2 bad
// configuration or input. Diagnostics go to the separate log stream.
//
// CSV columns are fixed; numbers carry 12 significant digits. JSON keys keep
// insertion order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluxqit/analytics.hpp"
#include "fluxqit/config.hpp"
#include "fluxqit/fidelity_oracle.hpp"
#include "fluxqit/protocol.hpp"

namespace fluxqit::cli {

enum ExitCode : int { kSuccess = 0, kThresholdFailure = 1, kConfigurationError = 2 };

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// x rounded to 12 significant digits, for JSON output.
inline double round12(double x) {
    if (!std::isfinite(x)) return x;
    return std::stod(format_number(x));
}

inline nlohmann::ordered_json complex_json(Complex z) { return {round12(z.real()), round12(z.imag())}; }

inline nlohmann::ordered_json state_json(const StateVector& s) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < s.dim(); ++k) out.push_back(complex_json(s.amplitudes()(k)));
    return out;
}

inline nlohmann::ordered_json basis_json(const SpaceConfig& space) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < space.dim(); ++k) out.push_back(space.label_string(k));
    return out;
}

inline std::string truth_table_header(const SpaceConfig& space) {
    std::string h =
        "input_row,step,expected,global_phase_re,global_phase_im,raw_deviation,normalized_deviation,"
        "max_p2_a,max_p2_b,photon_number";
    for (Eigen::Index k = 0; k < space.dim(); ++k) {
        const std::string l = space.label_string(k);
        h += ",re_" + l + ",im_" + l;
    }
    return h;
}

inline void write_truth_table(const TruthTable& table, const SpaceConfig& space, std::ostream& out) {
    out << truth_table_header(space) << '\n';
    for (const auto& e : table.entries) {
        const std::string expected = std::to_string(e.expected.a) + std::to_string(e.expected.b) +
                                     std::to_string(e.expected.n);
        out << e.row << ',' << e.step << ',' << expected << ',' << format_number(e.global_phase.real()) << ','
            << format_number(e.global_phase.imag()) << ',' << format_number(e.raw_deviation) << ','
            << format_number(e.normalized_deviation) << ',' << format_number(e.max_p2_a) << ','
            << format_number(e.max_p2_b) << ',' << format_number(e.photon_number);
        for (Eigen::Index k = 0; k < e.state.dim(); ++k) {
            const Complex z = e.state.amplitudes()(k);
            out << ',' << format_number(z.real()) << ',' << format_number(z.imag());
        }
        out << '\n';
    }
}

/// Both input rows through all steps; exit 0 iff every normalized deviation
/// is within the engine's threshold.
inline int cmd_truth_table(const RunConfig& cfg, Engine engine, std::ostream& out, std::ostream& log) {
    const Schedule schedule = cfg.schedule();
    const TruthTable table = verify_truth_table(schedule, engine, cfg.integrator);
    write_truth_table(table, schedule.space, out);
    const double dev = table.max_normalized_deviation();
    log << "truth-table engine=" << to_string(engine) << " max_normalized_deviation=" << format_number(dev)
        << " threshold=" << format_number(truth_table_threshold(engine)) << '\n';
    if (!table.passes()) {
        double leak = 0.0;
        for (const auto& e : table.entries) {
            if (e.step == 1) leak = std::max(leak, e.max_p2_a);
            if (e.step == 4) leak = std::max(leak, e.max_p2_b);
        }
        log << "threshold exceeded; peak |2> population during the Raman steps = " << format_number(leak) << '\n';
        return kThresholdFailure;
    }
    return kSuccess;
}

inline nlohmann::ordered_json transfer_report_json(const TransferReport& r) {
    nlohmann::ordered_json j;
    j["engine"] = to_string(r.engine);
    j["alpha"] = complex_json(r.alpha);
    j["beta"] = complex_json(r.beta);
    j["fidelity_vs_ideal"] = round12(r.fidelity_vs_ideal);
    j["residual_photon"] = round12(r.residual_photon);
    j["norm_drift"] = round12(r.norm_drift);
    nlohmann::ordered_json leak;
    leak["qubit_a"] = nlohmann::ordered_json::array();
    leak["qubit_b"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        leak["qubit_a"].push_back(round12(r.leakage_a[k]));
        leak["qubit_b"].push_back(round12(r.leakage_b[k]));
    }
    j["leakage"] = leak;
    j["basis"] = basis_json(r.final_state.space());
    j["final_state"] = state_json(r.final_state);
    j["step_trace"] = nlohmann::ordered_json::array();
    for (const auto& s : r.step_trace) j["step_trace"].push_back(state_json(s));
    return j;
}

inline int cmd_transfer(const RunConfig& cfg, Complex alpha, Complex beta, Engine engine, std::ostream& out,
                        std::ostream& log) {
    const double n = std::norm(alpha) + std::norm(beta);
    if (std::abs(n - 1.0) > 1e-12) {
        log << "input error: |alpha|^2 + |beta|^2 = " << format_number(n) << ", expected 1\n";
        return kConfigurationError;
    }
    const TransferReport report = run_transfer(alpha, beta, cfg.schedule(), engine, cfg.integrator);
    out << transfer_report_json(report).dump(2) << '\n';
    log << "transfer engine=" << to_string(engine) << " fidelity=" << format_number(report.fidelity_vs_ideal)
        << '\n';
    return kSuccess;
}

inline Grid default_fig4_grid() { return Grid::parse("1:10:1"); }

/// Average fidelity against rabi_tilde / s with s_a = s_b = s. The last row
/// is the s -> 0 limit, written with rabi_over_s = inf.
inline int cmd_fig4(const RunConfig& cfg, const Grid& grid, std::ostream& out, std::ostream& log) {
    out << "rabi_over_s,F_bar_eq12,F_bar_mc,mc_stderr\n";
    std::vector<double> xs = grid.values;
    for (double x : xs) {
        if (!(x > 0.0)) throw ConfigurationError("fig4 grid values must be > 0");
    }
    const auto row = [&](double label, const FidelityParams& params) {
        const FidelityConsistency c = fidelity_consistency(params, cfg.mc_samples, cfg.seed, cfg.threads);
        out << format_number(label) << ',' << format_number(c.printed_average) << ','
            << format_number(c.sampled.mean) << ',' << format_number(c.sampled.standard_error) << '\n';
        if (c.printed_discrepant) {
            log << "note: rabi_over_s=" << format_number(label) << " sampled " << format_number(c.sampled.mean)
                << " differs from the printed average " << format_number(c.printed_average) << " by more than 3 "
                << "standard errors (squared-form average " << format_number(c.squared_average) << ")\n";
        }
    };
    for (double x : xs) row(x, {1.0, 1.0, x});
    row(std::numeric_limits<double>::infinity(), {0.0, 0.0, 1.0});
    return kSuccess;
}

inline int cmd_timing(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Schedule s = cfg.schedule();
    nlohmann::ordered_json j;
    const char* names[] = {"t1", "t2", "t3", "t4"};
    for (std::size_t k = 0; k < 4; ++k) j[names[k]] = round12(s.steps[k].duration);
    j["tau"] = round12(s.total_time());
    out << j.dump(2) << '\n';
    return kSuccess;
}

/// Peak |2> occupation estimates for the two Raman steps.
inline int cmd_occupation(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const Schedule s = cfg.schedule();
    nlohmann::ordered_json j;
    const auto estimate = [&](QubitLabel q, const Step& step) {
        const Detunings d = detunings(s.qubit(q), s.resonator, step.drives.at(0));
        return round12(occupation_p2(step.drives.at(0).rabi, d.delta_uw, s.qubit(q).g, d.delta_c));
    };
    j["p2_a"] = estimate(QubitLabel::a, s.steps[0]);
    j["p2_b"] = estimate(QubitLabel::b, s.steps[3]);
    out << j.dump(2) << '\n';
    return kSuccess;
}

}  // namespace fluxqit::cli
