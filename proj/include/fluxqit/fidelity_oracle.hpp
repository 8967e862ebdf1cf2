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

// Sphere-averaged transfer fidelity by sampling. Each sample runs the
// analytic engine with the photon-branch level shifts switched on and scores
// |<psi_id|psi(tau)>|^2 directly, independent of the printed closed forms.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

#include "fluxqit/analytics.hpp"
#include "fluxqit/errors.hpp"
#include "fluxqit/protocol.hpp"

namespace fluxqit {

inline PhaseShiftModel phase_shift_model(const Schedule& schedule) {
    const auto x = [&](QubitLabel q) {
        const double g = schedule.qubit(q).g;
        return g * g / schedule.delta_c(q);
    };
    return phase_shift_model(x(QubitLabel::a), x(QubitLabel::b), schedule.steps[1].duration,
                             schedule.steps[2].duration);
}

/// SplitMix64 finalizer; sample k draws from (seed, k) alone so any split of
/// the sample range reproduces the same numbers.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform in [0, 1) from the top 53 bits.
inline double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Uniform point on the Bloch sphere: theta = acos(1 - 2u), phi = 2 pi v.
inline BlochAngles sample_bloch(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t base = splitmix64(seed) + 2 * index;
    const double u = unit_uniform(splitmix64(base));
    const double v = unit_uniform(splitmix64(base + 1));
    return {std::acos(1.0 - 2.0 * u), 2.0 * std::numbers::pi * v};
}

/// Schedule whose analytic run depends only on params: Raman steps are exact
/// pi/2 maps for any device, and the resonant steps take rabi_tilde.
inline Schedule reference_schedule(const FidelityParams& params) {
    params.validate();
    if (!(params.rabi_tilde > 0.0)) throw DomainError("rabi_tilde must be > 0");
    const QubitParams qa{110.0, 60.0, 1.0, QubitLabel::a};
    const QubitParams qb{110.0, 60.0, 1.0, QubitLabel::b};
    return build_schedule(qa, qb, ResonatorParams{100.0}, params.rabi_tilde);
}

inline double sample_fidelity(const Schedule& schedule, const PhaseShiftModel& shifts, const BlochAngles& angles) {
    const auto [alpha, beta] = bloch_amplitudes(angles);
    const ProtocolRun run = run_protocol(transfer_input(alpha, beta, schedule.space), schedule, Engine::analytic,
                                         IntegratorConfig{}, EngineOptions{}, &shifts);
    return std::norm(ideal_output(alpha, beta, schedule.space).overlap(run.trace.back()));
}

struct MonteCarloFidelity {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Per-sample fidelities for sample indices [begin, end).
inline std::vector<double> sample_fidelities(const FidelityParams& params, std::uint64_t seed, std::size_t begin,
                                             std::size_t end) {
    const Schedule schedule = reference_schedule(params);
    const PhaseShiftModel shifts = phase_shift_model(params);
    std::vector<double> out;
    out.reserve(end > begin ? end - begin : 0);
    for (std::size_t k = begin; k < end; ++k) out.push_back(sample_fidelity(schedule, shifts, sample_bloch(seed, k)));
    return out;
}

inline MonteCarloFidelity average_fidelity_mc(const FidelityParams& params, std::size_t n_samples,
                                              std::uint64_t seed, unsigned threads = 1) {
    if (n_samples < 1000) throw InputError("average_fidelity_mc needs at least 1000 samples");
    std::vector<double> values(n_samples);
    threads = std::max(1u, threads);
    {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (n_samples + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = std::min(n_samples, w * chunk);
            const std::size_t end = std::min(n_samples, begin + chunk);
            workers.emplace_back([&, begin, end] {
                const std::vector<double> part = sample_fidelities(params, seed, begin, end);
                std::copy(part.begin(), part.end(), values.begin() + static_cast<std::ptrdiff_t>(begin));
            });
        }
    }
    // Summed in index order so the result does not depend on the split.
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n_samples);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double variance = ss / static_cast<double>(n_samples - 1);
    return {mean, std::sqrt(variance / static_cast<double>(n_samples)), n_samples, seed};
}

/// Sampled average next to both printed readings, with a flag when the
/// sample mean sits more than three standard errors from a formula.
struct FidelityConsistency {
    double printed_average = 0.0;   ///< (1 + p^2 q^2 + p^4 q^4) / 3
    double squared_average = 0.0;   ///< (1 + p q + p^2 q^2) / 3
    MonteCarloFidelity sampled;
    bool printed_discrepant = false;
    bool squared_discrepant = false;
};

inline bool beyond_three_sigma(double sampled, double reference, double standard_error) {
    return std::abs(sampled - reference) > 3.0 * standard_error + 1e-12;
}

inline FidelityConsistency fidelity_consistency(const FidelityParams& params, std::size_t n_samples,
                                                std::uint64_t seed, unsigned threads = 1) {
    const PqFactors pq = pq_factors(params);
    FidelityConsistency c;
    c.printed_average = average_fidelity(pq.p, pq.q);
    c.squared_average = average_fidelity_squared_form(pq.p, pq.q);
    c.sampled = average_fidelity_mc(params, n_samples, seed, threads);
    c.printed_discrepant = beyond_three_sigma(c.sampled.mean, c.printed_average, c.sampled.standard_error);
    c.squared_discrepant = beyond_three_sigma(c.sampled.mean, c.squared_average, c.sampled.standard_error);
    return c;
}

}  // namespace fluxqit
