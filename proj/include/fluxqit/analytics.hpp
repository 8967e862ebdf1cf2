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

// Closed-form results for the transfer protocol: the Raman and resonant-drive
// evolutions, the level-|2> occupation estimate, the fidelity factors p and q
// with the printed fidelity formulas, the total operation time, and the
// photon-branch level shifts acting during the two resonant steps.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fluxqit/errors.hpp"
#include "fluxqit/model.hpp"

namespace fluxqit {

/// cos and sin of theta, exact when theta is within a few ulps of a multiple
/// of pi/2. The protocol's pulse areas are such multiples by construction.
inline std::pair<double, double> cos_sin(double theta) {
    const double quarters = theta / (0.5 * std::numbers::pi);
    const double k = std::nearbyint(quarters);
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(k));
    if (std::abs(quarters - k) <= slack && std::abs(k) < 1e15) {
        switch (((static_cast<long long>(k) % 4) + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return {std::cos(theta), std::sin(theta)};
}

/// exp(i theta) with the same exactness as cos_sin.
inline Complex unit_phase(double theta) {
    const auto [c, s] = cos_sin(theta);
    return {c, s};
}

/// Amplitudes on |0>|1>_c and |1>|0>_c of one qubit and the resonator.
struct RamanAmplitudes {
    Complex c01;
    Complex c10;
};

/// Raman evolution at rabi = g:
///   exp(i th) [ cos th, -i sin th ; -i sin th, cos th ],  th = g^2 t / Dc.
inline RamanAmplitudes raman_evolution(const RamanAmplitudes& in, double g, double delta_c, double t) {
    if (!(delta_c > 0.0)) throw DomainError("Raman evolution needs Delta_c > 0");
    const double theta = g * g * t / delta_c;
    const auto [c, s] = cos_sin(theta);
    const Complex global = unit_phase(theta);
    const Complex mis(0.0, -s);
    return {global * (c * in.c01 + mis * in.c10), global * (mis * in.c01 + c * in.c10)};
}

/// Resonant rotation on |i> (lower), |j> (upper) with pulse area rabi * t:
///   |i> -> cos |i> - i exp(-i phi) sin |j>,   |j> -> cos |j> - i exp(i phi) sin |i>.
inline std::pair<Complex, Complex> rabi_rotation(Complex amp_i, Complex amp_j, double rabi, double phase,
                                                 double t) {
    const auto [c, s] = cos_sin(rabi * t);
    const Complex to_i = Complex(0.0, -1.0) * unit_phase(phase) * s;
    const Complex to_j = Complex(0.0, -1.0) * unit_phase(-phase) * s;
    return {c * amp_i + to_i * amp_j, to_j * amp_i + c * amp_j};
}

/// Rotation generated by [[e_i, rabi e^{i phi}], [rabi e^{-i phi}, e_j]]
/// over time t. Reduces to rabi_rotation when e_i = e_j = 0.
inline std::pair<Complex, Complex> detuned_rabi_rotation(Complex amp_i, Complex amp_j, double rabi, double phase,
                                                         double energy_i, double energy_j, double t) {
    const double mean = 0.5 * (energy_i + energy_j);
    const double half_gap = 0.5 * (energy_i - energy_j);
    const double r = std::hypot(rabi, half_gap);
    const Complex global = unit_phase(-mean * t);
    if (r == 0.0) return {global * amp_i, global * amp_j};
    const auto [c, s] = cos_sin(r * t);
    // exp(-i K t) = cos(rt) - i sin(rt) K / r, K traceless part.
    const Complex mi(0.0, -1.0);
    const Complex kii(half_gap, 0.0);
    const Complex kij = rabi * unit_phase(phase);
    const double sr = s / r;
    const Complex new_i = (c + mi * sr * kii) * amp_i + mi * sr * kij * amp_j;
    const Complex new_j = mi * sr * std::conj(kij) * amp_i + (c - mi * sr * kii) * amp_j;
    return {global * new_i, global * new_j};
}

/// Raman evolution (rabi = g, lambda = g^2/Dc) on the manifold
/// {|0>|n+1>_c, |1>|n>_c}, generated by
///   [[-lambda (n+1), lambda sqrt(n+1)], [lambda sqrt(n+1), -lambda]].
/// For n = 0 this is raman_evolution.
inline RamanAmplitudes raman_manifold_evolution(const RamanAmplitudes& in, double g, double delta_c, int n,
                                                double t) {
    if (!(delta_c > 0.0)) throw DomainError("Raman evolution needs Delta_c > 0");
    if (n < 0) throw DomainError("photon number must be >= 0");
    if (n == 0) return raman_evolution(in, g, delta_c, t);
    const double lambda = g * g / delta_c;
    const double m = static_cast<double>(n + 1);
    const auto [c01, c10] =
        detuned_rabi_rotation(in.c01, in.c10, lambda * std::sqrt(m), 0.0, -lambda * m, -lambda, t);
    return {c01, c10};
}

/// Estimated peak occupation of level |2> during a Raman step.
inline double occupation_p2(double omega_rabi, double delta_uw, double g, double delta_c) {
    if (!(delta_uw > 0.0 && delta_c > 0.0)) throw DomainError("occupation_p2 needs positive detunings");
    const double w2 = 4.0 * omega_rabi * omega_rabi;
    const double g2 = 4.0 * g * g;
    return 0.5 * (w2 / (w2 + delta_uw * delta_uw) + g2 / (g2 + delta_c * delta_c));
}

/// s_k = 2 g_k^2 / Dc_k and the resonant-step Rabi frequency.
struct FidelityParams {
    double s_a = 0.0;
    double s_b = 0.0;
    double rabi_tilde = 0.0;

    void validate() const {
        if (!(s_a >= 0.0 && s_b >= 0.0 && rabi_tilde >= 0.0)) {
            throw DomainError("fidelity parameters must be >= 0");
        }
    }
};

inline double pq_factor(double rabi_tilde, double s) {
    const double r = std::sqrt(rabi_tilde * rabi_tilde + 0.25 * s * s);
    return rabi_tilde / r * std::sin(std::numbers::pi * r / (2.0 * rabi_tilde));
}

struct PqFactors {
    double p = 1.0;
    double q = 1.0;
};

inline PqFactors pq_factors(const FidelityParams& params) {
    params.validate();
    if (!(params.rabi_tilde > 0.0)) throw DomainError("pq_factors needs rabi_tilde > 0");
    return {pq_factor(params.rabi_tilde, params.s_a), pq_factor(params.rabi_tilde, params.s_b)};
}

inline void check_normalized(Complex alpha, Complex beta, double tolerance = 1e-12) {
    const double n = std::norm(alpha) + std::norm(beta);
    if (!(std::abs(n - 1.0) <= tolerance)) {
        throw InputError("|alpha|^2 + |beta|^2 = " + std::to_string(n) + ", expected 1");
    }
}

/// Printed fidelity |alpha|^2 + p q |beta|^2.
inline double fidelity(Complex alpha, Complex beta, double p, double q) {
    check_normalized(alpha, beta);
    return std::norm(alpha) + p * q * std::norm(beta);
}

/// Printed average fidelity (1 + p^2 q^2 + p^4 q^4) / 3.
inline double average_fidelity(double p, double q) {
    const double x2 = p * p * q * q;
    return (1.0 + x2 + x2 * x2) / 3.0;
}

/// Sphere average of (|alpha|^2 + p q |beta|^2)^2, i.e. of the squared form
/// of the printed fidelity: (1 + p q + p^2 q^2) / 3.
inline double average_fidelity_squared_form(double p, double q) {
    const double x = p * q;
    return (1.0 + x + x * x) / 3.0;
}

struct BlochAngles {
    double theta = 0.0;  ///< [0, pi]
    double phi = 0.0;    ///< [0, 2 pi)
};

/// alpha = cos(theta/2), beta = exp(i phi) sin(theta/2).
inline std::pair<Complex, Complex> bloch_amplitudes(const BlochAngles& angles) {
    return {Complex(std::cos(0.5 * angles.theta), 0.0), std::polar(std::sin(0.5 * angles.theta), angles.phi)};
}

/// Total time of the four steps.
inline double total_time(const QubitParams& qa, const QubitParams& qb, const ResonatorParams& r, double rabi_tilde) {
    const double da = qa.omega02 - r.omega_c;
    const double db = qb.omega02 - r.omega_c;
    if (!(da > 0.0 && db > 0.0)) throw DomainError("total_time needs positive resonator detunings");
    if (!(rabi_tilde > 0.0)) throw DomainError("total_time needs rabi_tilde > 0");
    return std::numbers::pi * da / (2.0 * qa.g * qa.g) + std::numbers::pi * db / (2.0 * qb.g * qb.g) +
           std::numbers::pi / rabi_tilde;
}

/// Diagonal energy shift of one qubit level while the resonator holds one
/// photon, acting for a whole resonant step. The accumulated phase factor is
/// exp(-i rate duration).
struct LevelShift {
    int step = 2;  ///< 2 or 3
    QubitLabel qubit = QubitLabel::a;
    int level = 0;
    double rate = 0.0;
    double duration = 0.0;

    Complex factor() const { return unit_phase(-rate * duration); }
    double phase() const { return -rate * duration; }
};

/// Off-resonant resonator shifts during steps 2 and 3 on the single-photon
/// branch. With x_k = g_k^2 / Dc_k = s_k / 2:
///   step 2: a|0> exp(+i t2 x_a), a|2> exp(-i t2 x_a), b|2> exp(-i t2 x_b)
///   step 3: a|2> exp(-i t3 x_a), b|0> exp(+i t3 x_b), b|2> exp(-i t3 x_b)
struct PhaseShiftModel {
    std::vector<LevelShift> shifts;

    /// Summed shift rate on (step, qubit, level); 0 if none.
    double rate(int step, QubitLabel qubit, int level) const {
        double r = 0.0;
        for (const auto& s : shifts) {
            if (s.step == step && s.qubit == qubit && s.level == level) r += s.rate;
        }
        return r;
    }

    double max_abs_phase() const {
        double m = 0.0;
        for (const auto& s : shifts) m = std::max(m, std::abs(s.phase()));
        return m;
    }
};

inline PhaseShiftModel phase_shift_model(double x_a, double x_b, double t2, double t3) {
    return {{
        {2, QubitLabel::a, 0, -x_a, t2},
        {2, QubitLabel::a, 2, x_a, t2},
        {2, QubitLabel::b, 2, x_b, t2},
        {3, QubitLabel::a, 2, x_a, t3},
        {3, QubitLabel::b, 0, -x_b, t3},
        {3, QubitLabel::b, 2, x_b, t3},
    }};
}

inline PhaseShiftModel phase_shift_model(const FidelityParams& params) {
    params.validate();
    if (!(params.rabi_tilde > 0.0)) throw DomainError("phase_shift_model needs rabi_tilde > 0");
    const double t = std::numbers::pi / (2.0 * params.rabi_tilde);
    return phase_shift_model(0.5 * params.s_a, 0.5 * params.s_b, t, t);
}

}  // namespace fluxqit
