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

// Command-line front end: truth-table, transfer, fig4, timing, occupation.

#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "fluxqit/cli.hpp"

namespace {

using fluxqit::cli::kConfigurationError;
using fluxqit::cli::kThresholdFailure;

struct Options {
    std::string config_path;
    std::string engine = "analytic";
    double alpha_re = 1.0;
    double alpha_im = 0.0;
    double beta_re = 0.0;
    double beta_im = 0.0;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string grid;
    unsigned threads = 0;
};

int emit(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "cannot write '" << path << "'\n";
        return kConfigurationError;
    }
    f << body;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two flux qubits, one resonator: state-transfer simulator"};
    app.require_subcommand(1);
    Options opt;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "JSON run configuration (defaults when omitted)");
        cmd->add_option("--out", opt.out, "output file (stdout when omitted)");
    };
    const auto add_engine = [&](CLI::App* cmd) {
        cmd->add_option("--engine", opt.engine, "analytic | effective | full")
            ->check(CLI::IsMember({"analytic", "effective", "full"}));
    };

    auto* truth = app.add_subcommand("truth-table", "per-step states for |0>_a|1>_b and |1>_a|1>_b (CSV)");
    add_common(truth);
    add_engine(truth);

    auto* transfer = app.add_subcommand("transfer", "transfer (alpha|0> + beta|1>)_a onto qubit b (JSON)");
    add_common(transfer);
    add_engine(transfer);
    transfer->add_option("--alpha-re", opt.alpha_re);
    transfer->add_option("--alpha-im", opt.alpha_im);
    transfer->add_option("--beta-re", opt.beta_re);
    transfer->add_option("--beta-im", opt.beta_im);

    auto* fig4 = app.add_subcommand("fig4", "average fidelity against rabi_tilde/s (CSV)");
    add_common(fig4);
    fig4->add_option("--seed", opt.seed, "sampling seed");
    fig4->add_option("--grid", opt.grid, "rabi_tilde/s grid as start:stop:step");
    fig4->add_option("--threads", opt.threads, "sampling threads (0: all cores); output does not depend on it");

    auto* timing = app.add_subcommand("timing", "step durations and total time (JSON)");
    add_common(timing);

    auto* occupation = app.add_subcommand("occupation", "peak |2> occupation estimates (JSON)");
    add_common(occupation);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigurationError;
    }

    try {
        fluxqit::RunConfig cfg = opt.config_path.empty() ? fluxqit::default_config()
                                                         : fluxqit::load_config(opt.config_path);
        if (opt.seed) cfg.seed = *opt.seed;
        if (!opt.out.empty()) cfg.output_path = opt.out;
        cfg.threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;

        std::ostringstream body;
        int rc = 0;
        if (*truth) {
            rc = fluxqit::cli::cmd_truth_table(cfg, fluxqit::parse_engine(opt.engine), body, std::cerr);
        } else if (*transfer) {
            rc = fluxqit::cli::cmd_transfer(cfg, {opt.alpha_re, opt.alpha_im}, {opt.beta_re, opt.beta_im},
                                            fluxqit::parse_engine(opt.engine), body, std::cerr);
        } else if (*fig4) {
            fluxqit::Grid grid = fluxqit::cli::default_fig4_grid();
            if (!opt.grid.empty()) {
                grid = fluxqit::Grid::parse(opt.grid);
            } else if (cfg.sweep) {
                grid = cfg.sweep->grid;
            }
            rc = fluxqit::cli::cmd_fig4(cfg, grid, body, std::cerr);
        } else if (*timing) {
            rc = fluxqit::cli::cmd_timing(cfg, body, std::cerr);
        } else if (*occupation) {
            rc = fluxqit::cli::cmd_occupation(cfg, body, std::cerr);
        }
        const int wrc = emit(cfg.output_path, body.str());
        return wrc != 0 ? wrc : rc;
    } catch (const fluxqit::ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigurationError;
    } catch (const fluxqit::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kConfigurationError;
    } catch (const fluxqit::IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << '\n';
        return kThresholdFailure;
    } catch (const fluxqit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kThresholdFailure;
    }
}
