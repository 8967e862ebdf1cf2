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

// Four-step transfer of an arbitrary state of qubit a onto qubit b through
// the resonator:
//
//   1. Raman pulse on qubit a (|1>_a|0>_c -> |0>_a|1>_c), duration pi Dc_a / (2 g_a^2)
//   2. resonant pulses a:|0>->|2> and b:|1>->|2> (phase -pi/2), duration pi / (2 rabi_tilde)
//   3. resonant pulses a:|2>->|1> and b:|2>->|0> (phase +pi/2), duration pi / (2 rabi_tilde)
//   4. Raman pulse on qubit b (|0>_b|1>_c -> |1>_b|0>_c), duration pi Dc_b / (2 g_b^2)
//
// Three engines execute it: closed-form maps (analytic), propagation of the
// eliminated/resonant Hamiltonians (effective), and RK4 integration of the
// full time-dependent interaction Hamiltonian (full).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fluxqit/analytics.hpp"
#include "fluxqit/errors.hpp"
#include "fluxqit/hilbert.hpp"
#include "fluxqit/model.hpp"
#include "fluxqit/propagator.hpp"

namespace fluxqit {

enum class Engine { analytic, effective, full };

inline const char* to_string(Engine e) {
    switch (e) {
        case Engine::analytic: return "analytic";
        case Engine::effective: return "effective";
        case Engine::full: return "full";
    }
    return "?";
}

inline Engine parse_engine(const std::string& name) {
    if (name == "analytic") return Engine::analytic;
    if (name == "effective") return Engine::effective;
    if (name == "full") return Engine::full;
    throw ConfigurationError("unknown engine '" + name + "' (expected analytic, effective or full)");
}

/// Phase of the Raman drives. With this phase the eliminated Hamiltonian's
/// flip-flop term is +(rabi g/Dc)(a^+ s01 + h.c.), which generates the
/// -i sin(g^2 t/Dc) off-diagonal of raman_evolution.
inline constexpr double kRamanDrivePhase = std::numbers::pi;

struct Step {
    int index = 1;  ///< 1..4
    std::vector<DriveParams> drives;
    double start = 0.0;
    double duration = 0.0;
    std::string engine_note;

    bool is_raman() const { return index == 1 || index == 4; }
};

struct Schedule {
    std::array<Step, 4> steps;
    std::array<QubitParams, 2> qubits;
    ResonatorParams resonator;
    double rabi_tilde = 0.0;
    SpaceConfig space;

    const QubitParams& qubit(QubitLabel q) const { return qubits[q == QubitLabel::a ? 0 : 1]; }
    double delta_c(QubitLabel q) const { return qubit(q).omega02 - resonator.omega_c; }

    double total_time() const {
        double t = 0.0;
        for (const auto& s : steps) t += s.duration;
        return t;
    }

    FidelityParams fidelity_params() const {
        const auto s = [&](QubitLabel q) { return 2.0 * qubit(q).g * qubit(q).g / delta_c(q); };
        return {s(QubitLabel::a), s(QubitLabel::b), rabi_tilde};
    }
};

inline Schedule build_schedule(QubitParams qa, QubitParams qb, const ResonatorParams& r, double rabi_tilde,
                               const SpaceConfig& space = SpaceConfig{}) {
    qa.label = QubitLabel::a;
    qb.label = QubitLabel::b;
    qa.validate();
    qb.validate();
    r.validate();
    if (!(std::isfinite(rabi_tilde) && rabi_tilde > 0.0)) {
        throw ConfigurationError("rabi_tilde must be finite and > 0");
    }
    const double da = qa.omega02 - r.omega_c;
    const double db = qb.omega02 - r.omega_c;
    if (!(da > 0.0 && db > 0.0)) {
        throw ConfigurationError("resonator detunings omega02 - omega_c must be > 0 for both qubits");
    }
    // Raman carriers sit Dc below omega12.
    const double carrier_a = qa.omega12 - da;
    const double carrier_b = qb.omega12 - db;
    if (!(carrier_a > 0.0 && carrier_b > 0.0)) {
        throw ConfigurationError("Raman carrier omega12 - Dc must be > 0; raise omega12 or lower the detuning");
    }
    constexpr double half_pi = 0.5 * std::numbers::pi;
    const double t1 = std::numbers::pi * da / (2.0 * qa.g * qa.g);
    const double t2 = std::numbers::pi / (2.0 * rabi_tilde);
    const double t3 = t2;
    const double t4 = std::numbers::pi * db / (2.0 * qb.g * qb.g);

    Schedule s{.steps = {},
               .qubits = {qa, qb},
               .resonator = r,
               .rabi_tilde = rabi_tilde,
               .space = space};
    s.steps[0] = {1,
                  {{QubitLabel::a, Transition::t12, carrier_a, qa.g, kRamanDrivePhase}},
                  0.0,
                  t1,
                  "Raman pulse on a (|1>-|2>, detuned by Dc_a) with the resonator on a's |0>-|2>; b idle in |1>"};
    s.steps[1] = {2,
                  {{QubitLabel::a, Transition::t02, qa.omega02, rabi_tilde, -half_pi},
                   {QubitLabel::b, Transition::t12, qb.omega12, rabi_tilde, -half_pi}},
                  t1,
                  t2,
                  "resonant pulses a:|0>-|2>, b:|1>-|2>; resonator off-resonant with both |0>-|2>"};
    s.steps[2] = {3,
                  {{QubitLabel::a, Transition::t12, qa.omega12, rabi_tilde, half_pi},
                   {QubitLabel::b, Transition::t02, qb.omega02, rabi_tilde, half_pi}},
                  t1 + t2,
                  t3,
                  "resonant pulses a:|1>-|2>, b:|0>-|2>; resonator off-resonant with both |0>-|2>"};
    s.steps[3] = {4,
                  {{QubitLabel::b, Transition::t12, carrier_b, qb.g, kRamanDrivePhase}},
                  t1 + t2 + t3,
                  t4,
                  "Raman pulse on b (|1>-|2>, detuned by Dc_b) with the resonator on b's |0>-|2>; a idle in |1>"};
    return s;
}

struct EngineOptions {
    /// Full engine: keep the idle qubit's resonator coupling on during the
    /// Raman steps. Steps 2 and 3 always couple both qubits.
    bool couple_idle_qubit = false;
    /// Effective engine: instants sampled per step for leakage tracking.
    std::size_t effective_samples = 65;
};

/// Full-engine Hamiltonian for one step.
inline InteractionHamiltonian step_hamiltonian(const Schedule& schedule, const Step& step,
                                               const EngineOptions& options = {}) {
    CouplingSelection coupling;
    if (step.index == 1 && !options.couple_idle_qubit) coupling.qubit_b = false;
    if (step.index == 4 && !options.couple_idle_qubit) coupling.qubit_a = false;
    return InteractionHamiltonian(schedule.qubits, schedule.resonator, step.drives, schedule.space, coupling);
}

/// Smallest default RK4 step over the four full-engine Hamiltonians.
inline double schedule_time_step(const Schedule& schedule, const EngineOptions& options = {}) {
    double dt = std::numeric_limits<double>::infinity();
    for (const auto& step : schedule.steps) {
        dt = std::min(dt, default_time_step(step_hamiltonian(schedule, step, options).max_frequency()));
    }
    return dt;
}

struct StepOutcome {
    StateVector state;
    double max_p2_a = 0.0;  ///< max population of |2>_a seen during the step
    double max_p2_b = 0.0;
    double norm_drift = 0.0;
};

namespace detail {

inline Eigen::Index with_qubit_level(const SpaceConfig& space, BasisLabel l, QubitLabel q, int level) {
    (q == QubitLabel::a ? l.a : l.b) = level;
    return space.index(l);
}

/// Closed-form Raman step on the target qubit at rabi = g. The other qubit
/// is a spectator and |2> of the target is untouched. Each manifold
/// {|0>|n+1>_c, |1>|n>_c} rotates on its own; |0>|0>_c is fixed and the
/// unpaired |1>|N>_c only picks up its Stark phase.
inline Vector analytic_raman(const Vector& psi, const Schedule& schedule, const Step& step) {
    const SpaceConfig& space = schedule.space;
    const DriveParams& d = step.drives.at(0);
    const QubitParams& q = schedule.qubit(d.target);
    if (std::abs(d.rabi - q.g) > 1e-12 * q.g || d.phase != kRamanDrivePhase) {
        throw DomainError("closed-form Raman map needs rabi = g and the Raman drive phase");
    }
    const double dc = schedule.delta_c(d.target);
    const int cutoff = space.fock_cutoff();
    Vector out = psi;
    for (int other = 0; other < kQubitLevels; ++other) {
        const BasisLabel base = d.target == QubitLabel::a ? BasisLabel{0, other, 0} : BasisLabel{other, 0, 0};
        for (int n = 0; n < cutoff; ++n) {
            BasisLabel upper = base;
            upper.n = n + 1;
            BasisLabel lower = base;
            lower.n = n;
            const Eigen::Index i01 = with_qubit_level(space, upper, d.target, 0);
            const Eigen::Index i10 = with_qubit_level(space, lower, d.target, 1);
            const RamanAmplitudes r = raman_manifold_evolution({psi(i01), psi(i10)}, q.g, dc, n, step.duration);
            out(i01) = r.c01;
            out(i10) = r.c10;
        }
        BasisLabel top = base;
        top.n = cutoff;
        const Eigen::Index i1n = with_qubit_level(space, top, d.target, 1);
        out(i1n) = psi(i1n) * unit_phase(q.g * q.g / dc * step.duration);
    }
    return out;
}

/// Closed-form resonant step. With a phase-shift model, the single-photon
/// branch evolves under the drive plus the model's level shifts.
inline Vector analytic_resonant(const Vector& psi, const Schedule& schedule, const Step& step,
                                const PhaseShiftModel* shifts) {
    const SpaceConfig& space = schedule.space;
    Vector out = psi;
    for (const auto& d : step.drives) {
        const int i = lower_level(d.transition);
        const int j = upper_level(d.transition);
        const int spectator = 3 - i - j;
        for (int other = 0; other < kQubitLevels; ++other) {
            for (int n = 0; n <= space.fock_cutoff(); ++n) {
                const BasisLabel base = d.target == QubitLabel::a ? BasisLabel{0, other, n} : BasisLabel{other, 0, n};
                const Eigen::Index ii = with_qubit_level(space, base, d.target, i);
                const Eigen::Index jj = with_qubit_level(space, base, d.target, j);
                if (shifts != nullptr && n == 1) {
                    const auto [ai, aj] = detuned_rabi_rotation(out(ii), out(jj), d.rabi, d.phase,
                                                                shifts->rate(step.index, d.target, i),
                                                                shifts->rate(step.index, d.target, j), step.duration);
                    out(ii) = ai;
                    out(jj) = aj;
                    const Eigen::Index kk = with_qubit_level(space, base, d.target, spectator);
                    out(kk) *= unit_phase(-shifts->rate(step.index, d.target, spectator) * step.duration);
                } else {
                    const auto [ai, aj] = rabi_rotation(out(ii), out(jj), d.rabi, d.phase, step.duration);
                    out(ii) = ai;
                    out(jj) = aj;
                }
            }
        }
    }
    return out;
}

inline void track_leakage(const Vector& psi, const SpaceConfig& space, double& p2a, double& p2b) {
    double a = 0.0;
    double b = 0.0;
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        const BasisLabel l = space.label(k);
        const double p = std::norm(psi(k));
        if (l.a == 2) a += p;
        if (l.b == 2) b += p;
    }
    p2a = std::max(p2a, a);
    p2b = std::max(p2b, b);
}

}  // namespace detail

/// Runs one protocol step (index 0..3 into schedule.steps) with the given
/// engine. shifts only affects the analytic engine.
inline StepOutcome run_step(const StateVector& in, const Schedule& schedule, std::size_t k, Engine engine,
                            const IntegratorConfig& cfg, const EngineOptions& options = {},
                            const PhaseShiftModel* shifts = nullptr) {
    if (in.space() != schedule.space) throw DimensionError("state space differs from the schedule's space");
    const Step& step = schedule.steps.at(k);
    const SpaceConfig& space = schedule.space;
    StepOutcome outcome{in};
    detail::track_leakage(in.amplitudes(), space, outcome.max_p2_a, outcome.max_p2_b);

    switch (engine) {
        case Engine::analytic: {
            Vector v = step.is_raman() ? detail::analytic_raman(in.amplitudes(), schedule, step)
                                       : detail::analytic_resonant(in.amplitudes(), schedule, step, shifts);
            outcome.state = StateVector(space, std::move(v));
            break;
        }
        case Engine::effective: {
            Operator h = Operator::zero(space.dim());
            for (const auto& d : step.drives) {
                const QubitParams& q = schedule.qubit(d.target);
                h = h + (step.is_raman() ? effective_raman_hamiltonian(q, schedule.resonator, d, space)
                                         : resonant_drive_hamiltonian(d, q, space));
            }
            const auto samples = std::max<std::size_t>(options.effective_samples, 2);
            const Trajectory traj = step_and_record(in, h, step.duration, samples, cfg.norm_tolerance);
            for (const auto& [t, s] : traj) {
                detail::track_leakage(s.amplitudes(), space, outcome.max_p2_a, outcome.max_p2_b);
            }
            outcome.state = traj.back().second;
            break;
        }
        case Engine::full: {
            const InteractionHamiltonian h = step_hamiltonian(schedule, step, options);
            double& p2a = outcome.max_p2_a;
            double& p2b = outcome.max_p2_b;
            Evolution ev = integrate(in, h, step.start, step.duration, cfg, [&](double, const Vector& psi) {
                detail::track_leakage(psi, space, p2a, p2b);
            });
            outcome.state = std::move(ev.state);
            break;
        }
    }
    outcome.norm_drift = std::abs(outcome.state.norm() - in.norm());
    return outcome;
}

struct ProtocolRun {
    std::vector<StateVector> trace;   ///< initial state and the state after each step
    std::array<double, 4> leakage_a{};  ///< max |2>_a population per step
    std::array<double, 4> leakage_b{};
    double norm_drift = 0.0;           ///< max | ||psi|| - ||psi_0|| | over the trace
};

inline ProtocolRun run_protocol(const StateVector& initial, const Schedule& schedule, Engine engine,
                                const IntegratorConfig& cfg, const EngineOptions& options = {},
                                const PhaseShiftModel* shifts = nullptr) {
    IntegratorConfig step_cfg = cfg;
    if (engine == Engine::full && step_cfg.dt == 0.0) step_cfg.dt = schedule_time_step(schedule, options);
    ProtocolRun run;
    run.trace.reserve(5);
    run.trace.push_back(initial);
    const double norm0 = initial.norm();
    for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
        StepOutcome out = run_step(run.trace.back(), schedule, k, engine, step_cfg, options, shifts);
        run.leakage_a[k] = out.max_p2_a;
        run.leakage_b[k] = out.max_p2_b;
        run.norm_drift = std::max(run.norm_drift, std::abs(out.state.norm() - norm0));
        run.trace.push_back(std::move(out.state));
    }
    check_norm_drift(run.norm_drift, cfg.norm_tolerance);
    return run;
}

/// (alpha|0>_a + beta|1>_a) |1>_b |0>_c
inline StateVector transfer_input(Complex alpha, Complex beta, const SpaceConfig& space) {
    Vector v = Vector::Zero(space.dim());
    v(space.index({0, 1, 0})) = alpha;
    v(space.index({1, 1, 0})) = beta;
    return {space, std::move(v)};
}

/// |1>_a (alpha|0>_b + beta|1>_b) |0>_c
inline StateVector ideal_output(Complex alpha, Complex beta, const SpaceConfig& space) {
    Vector v = Vector::Zero(space.dim());
    v(space.index({1, 0, 0})) = alpha;
    v(space.index({1, 1, 0})) = beta;
    return {space, std::move(v)};
}

inline double transfer_fidelity(Complex alpha, Complex beta, const StateVector& final_state) {
    const double f = std::norm(ideal_output(alpha, beta, final_state.space()).overlap(final_state));
    return std::clamp(f, 0.0, 1.0);
}

struct TransferReport {
    Engine engine = Engine::analytic;
    Complex alpha;
    Complex beta;
    StateVector final_state;
    std::vector<StateVector> step_trace;
    double fidelity_vs_ideal = 0.0;
    std::array<double, 4> leakage_a{};
    std::array<double, 4> leakage_b{};
    double residual_photon = 0.0;
    double norm_drift = 0.0;
};

inline TransferReport run_transfer(Complex alpha, Complex beta, const Schedule& schedule, Engine engine,
                                   const IntegratorConfig& cfg = {}, const EngineOptions& options = {},
                                   const PhaseShiftModel* shifts = nullptr) {
    check_normalized(alpha, beta);
    ProtocolRun run = run_protocol(transfer_input(alpha, beta, schedule.space), schedule, engine, cfg, options, shifts);
    const StateVector& final_state = run.trace.back();
    return {.engine = engine,
            .alpha = alpha,
            .beta = beta,
            .final_state = final_state,
            .step_trace = run.trace,
            .fidelity_vs_ideal = transfer_fidelity(alpha, beta, final_state),
            .leakage_a = run.leakage_a,
            .leakage_b = run.leakage_b,
            .residual_photon = std::clamp(photon_number(final_state), 0.0, 1.0),
            .norm_drift = run.norm_drift};
}

/// Expected basis state of each input row after steps 0..4.
inline const std::array<std::array<BasisLabel, 5>, 2>& truth_table_targets() {
    static const std::array<std::array<BasisLabel, 5>, 2> table{{
        {{{0, 1, 0}, {0, 1, 0}, {2, 2, 0}, {1, 0, 0}, {1, 0, 0}}},
        {{{1, 1, 0}, {0, 1, 1}, {2, 2, 1}, {1, 0, 1}, {1, 1, 0}}},
    }};
    return table;
}

/// Largest normalized per-amplitude deviation at which verify_truth_table
/// counts as reproduced.
inline double truth_table_threshold(Engine engine) {
    switch (engine) {
        case Engine::analytic: return 0.0;
        case Engine::effective: return 1e-8;
        case Engine::full: return 0.25;
    }
    return 0.0;
}

struct TruthTableEntry {
    int row = 0;   ///< 0: |0>_a|1>_b input, 1: |1>_a|1>_b input
    int step = 0;  ///< 0 (input) .. 4
    BasisLabel expected;
    StateVector state;
    /// <expected|state> / |<expected|state>|; the per-entry global phase.
    Complex global_phase{1.0, 0.0};
    double raw_deviation = 0.0;         ///< max_k |state_k - expected_k|
    double normalized_deviation = 0.0;  ///< same after removing global_phase
    double max_p2_a = 0.0;              ///< during the step leading here
    double max_p2_b = 0.0;
    double photon_number = 0.0;
};

struct TruthTable {
    Engine engine = Engine::analytic;
    std::vector<TruthTableEntry> entries;

    double max_raw_deviation() const {
        double m = 0.0;
        for (const auto& e : entries) m = std::max(m, e.raw_deviation);
        return m;
    }
    double max_normalized_deviation() const {
        double m = 0.0;
        for (const auto& e : entries) m = std::max(m, e.normalized_deviation);
        return m;
    }
    bool passes() const { return max_normalized_deviation() <= truth_table_threshold(engine); }
};

inline TruthTable verify_truth_table(const Schedule& schedule, Engine engine, const IntegratorConfig& cfg = {},
                                     const EngineOptions& options = {}) {
    const SpaceConfig& space = schedule.space;
    TruthTable table{engine, {}};
    for (int row = 0; row < 2; ++row) {
        const auto& targets = truth_table_targets()[row];
        const ProtocolRun run =
            run_protocol(StateVector::basis(space, targets[0]), schedule, engine, cfg, options);
        for (int step = 0; step < 5; ++step) {
            const StateVector& s = run.trace[step];
            const StateVector expected = StateVector::basis(space, targets[step]);
            const Complex ov = expected.overlap(s);
            const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex(1.0, 0.0);
            const Vector diff_raw = s.amplitudes() - expected.amplitudes();
            const Vector diff_norm = std::conj(phase) * s.amplitudes() - expected.amplitudes();
            table.entries.push_back({.row = row,
                                     .step = step,
                                     .expected = targets[step],
                                     .state = s,
                                     .global_phase = phase,
                                     .raw_deviation = diff_raw.cwiseAbs().maxCoeff(),
                                     .normalized_deviation = diff_norm.cwiseAbs().maxCoeff(),
                                     .max_p2_a = step == 0 ? 0.0 : run.leakage_a[step - 1],
                                     .max_p2_b = step == 0 ? 0.0 : run.leakage_b[step - 1],
                                     .photon_number = photon_number(s)});
        }
    }
    return table;
}

}  // namespace fluxqit
