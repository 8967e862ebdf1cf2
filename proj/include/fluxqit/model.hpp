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

// Hamiltonians for two Lambda-type qubits sharing one resonator mode. All
// quantities are angular frequencies (rad/s) with hbar = 1. Everything is
// written in the interaction picture of sum_l E_l sigma_ll + omega_c a^+ a, so
// a coupling term picks up exp(-i Delta t) where Delta is the transition
// frequency minus the field frequency.
//
// Drive phase convention: a lab-frame drive rabi * (exp(i(omega t + phi)) |i><j| + h.c.)
// on the transition |i> (lower) <-> |j> (upper) becomes
// rabi * exp(i phi) exp(-i Delta t) |i><j| + h.c. At Delta = 0 this is the
// resonant form rabi * (exp(i phi) |i><j| + h.c.).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fluxqit/errors.hpp"
#include "fluxqit/hilbert.hpp"

namespace fluxqit {

enum class QubitLabel { a, b };

inline Slot slot_of(QubitLabel q) { return q == QubitLabel::a ? Slot::qubit_a : Slot::qubit_b; }
inline const char* to_string(QubitLabel q) { return q == QubitLabel::a ? "a" : "b"; }

struct QubitParams {
    double omega02 = 0.0;  ///< |0> <-> |2> transition frequency
    double omega12 = 0.0;  ///< |1> <-> |2> transition frequency
    double g = 0.0;        ///< resonator coupling on |0> <-> |2>
    QubitLabel label = QubitLabel::a;

    void validate() const {
        if (!(std::isfinite(omega02) && std::isfinite(omega12) && std::isfinite(g))) {
            throw ConfigurationError(std::string("qubit ") + to_string(label) + ": non-finite parameter");
        }
        if (!(omega02 > omega12 && omega12 > 0.0)) {
            throw ConfigurationError(std::string("qubit ") + to_string(label) +
                                     ": Lambda ordering requires omega02 > omega12 > 0");
        }
        if (!(g > 0.0)) {
            throw ConfigurationError(std::string("qubit ") + to_string(label) + ": coupling g must be > 0");
        }
    }
};

struct ResonatorParams {
    double omega_c = 0.0;

    void validate() const {
        if (!(std::isfinite(omega_c) && omega_c > 0.0)) {
            throw ConfigurationError("resonator frequency must be finite and > 0");
        }
    }
};

/// Driven transition. The lower level is |0> or |1>, the upper is always |2>.
enum class Transition { t12, t02 };

inline int lower_level(Transition t) { return t == Transition::t12 ? 1 : 0; }
inline constexpr int upper_level(Transition) { return 2; }
inline const char* to_string(Transition t) { return t == Transition::t12 ? "12" : "02"; }

struct DriveParams {
    QubitLabel target = QubitLabel::a;
    Transition transition = Transition::t12;
    double omega_uw = 0.0;  ///< carrier frequency
    double rabi = 0.0;      ///< Rabi frequency
    double phase = 0.0;     ///< initial phase, in (-pi, pi]

    void validate() const {
        if (!(std::isfinite(rabi) && rabi >= 0.0)) {
            throw ConfigurationError("drive Rabi frequency must be >= 0");
        }
        if (!(phase > -std::numbers::pi && phase <= std::numbers::pi)) {
            throw ConfigurationError("drive phase must lie in (-pi, pi]");
        }
    }
};

struct Detunings {
    double delta_c = 0.0;   ///< omega02 - omega_c
    double delta_uw = 0.0;  ///< driven transition frequency - omega_uw
};

inline double transition_frequency(const QubitParams& q, Transition t) {
    return t == Transition::t12 ? q.omega12 : q.omega02;
}

inline Detunings detunings(const QubitParams& q, const ResonatorParams& r, const DriveParams& d) {
    if (d.target != q.label) {
        throw ConfigurationError(std::string("drive targets qubit ") + to_string(d.target) +
                                 " but parameters are for qubit " + to_string(q.label));
    }
    return {q.omega02 - r.omega_c, transition_frequency(q, d.transition) - d.omega_uw};
}

/// Which qubits' |0> <-> |2> transitions couple to the resonator.
struct CouplingSelection {
    bool qubit_a = true;
    bool qubit_b = true;
};

/// Time-dependent full interaction-picture Hamiltonian
///
///   H(t) = sum_k g_k (exp(-i Dc_k t) a^+ |0><2|_k + h.c.)
///        + sum_drives rabi (exp(i phi) exp(-i D t) |i><j| + h.c.)
///
/// Built once, evaluated at many t. Each term is stored as its lowering part
/// L with frequency nu, contributing exp(-i nu t) L + exp(i nu t) L^+.
class InteractionHamiltonian {
  public:
    InteractionHamiltonian(const std::array<QubitParams, 2>& qubits, const ResonatorParams& resonator,
                           const std::vector<DriveParams>& drives, const SpaceConfig& space,
                           CouplingSelection coupling = {})
        : space_(space) {
        if (qubits[0].label != QubitLabel::a || qubits[1].label != QubitLabel::b) {
            throw ConfigurationError("qubit parameters must be ordered (a, b)");
        }
        for (const auto& q : qubits) q.validate();
        resonator.validate();

        const Operator create = single_site_operator(SiteOperator::create(), Slot::resonator, space);
        for (const auto& q : qubits) {
            const bool on = q.label == QubitLabel::a ? coupling.qubit_a : coupling.qubit_b;
            if (!on) continue;
            const Operator sigma02 = single_site_operator(SiteOperator::sigma(0, 2), slot_of(q.label), space);
            add_term(q.omega02 - resonator.omega_c, Complex(q.g, 0.0), (create * sigma02).matrix());
        }
        for (const auto& d : drives) {
            d.validate();
            const QubitParams& q = qubits[d.target == QubitLabel::a ? 0 : 1];
            const Detunings det = detunings(q, resonator, d);
            const Operator s = single_site_operator(
                SiteOperator::sigma(lower_level(d.transition), upper_level(d.transition)), slot_of(d.target), space);
            add_term(det.delta_uw, std::polar(d.rabi, d.phase), s.matrix());
        }
    }

    const SpaceConfig& space() const { return space_; }

    Operator operator()(double t) const {
        Matrix h = Matrix::Zero(space_.dim(), space_.dim());
        for (const auto& term : terms_) {
            const Complex ph = std::polar(1.0, -term.frequency * t);
            h += ph * term.lowering;
            h += std::conj(ph) * term.raising;
        }
        return {std::move(h), true};
    }

    /// H(t) psi without materializing H(t) as an Operator.
    void apply(double t, const Vector& psi, Vector& out) const {
        out.setZero(psi.size());
        for (const auto& term : terms_) {
            const Complex ph = std::polar(1.0, -term.frequency * t);
            const Complex phc = std::conj(ph);
            for (const auto& e : term.entries) {
                out(e.row) += ph * e.value * psi(e.col);
                out(e.col) += phc * std::conj(e.value) * psi(e.row);
            }
        }
    }

    /// Largest rotating-phase frequency |nu| among active terms.
    double max_rotating_frequency() const {
        double w = 0.0;
        for (const auto& term : terms_) w = std::max(w, std::abs(term.frequency));
        return w;
    }

    /// Upper bound on ||H(t)||: sum of the term norms.
    double coupling_bound() const {
        double b = 0.0;
        for (const auto& term : terms_) b += term.strength;
        return b;
    }

    /// Fastest time scale present, used to pick the integrator step.
    double max_frequency() const { return std::max(max_rotating_frequency(), coupling_bound()); }

  private:
    struct Entry {
        Eigen::Index row;
        Eigen::Index col;
        Complex value;
    };

    struct Term {
        double frequency;
        Matrix lowering;
        Matrix raising;
        double strength;
        std::vector<Entry> entries;  ///< nonzeros of lowering
    };

    void add_term(double frequency, Complex coefficient, const Matrix& op) {
        if (coefficient == Complex(0.0, 0.0)) return;
        Matrix lowering = coefficient * op;
        // Each row and column holds at most one nonzero, so the largest entry is the norm.
        const double strength = lowering.cwiseAbs().maxCoeff();
        std::vector<Entry> entries;
        for (Eigen::Index j = 0; j < lowering.cols(); ++j) {
            for (Eigen::Index i = 0; i < lowering.rows(); ++i) {
                if (lowering(i, j) != Complex(0.0, 0.0)) entries.push_back({i, j, lowering(i, j)});
            }
        }
        Matrix raising = lowering.adjoint();
        terms_.push_back({frequency, std::move(lowering), std::move(raising), strength, std::move(entries)});
    }

    SpaceConfig space_;
    std::vector<Term> terms_;
};

inline Operator full_interaction_hamiltonian(double t, const std::array<QubitParams, 2>& qubits,
                                             const ResonatorParams& resonator,
                                             const std::vector<DriveParams>& drives, const SpaceConfig& space,
                                             CouplingSelection coupling = {}) {
    return InteractionHamiltonian(qubits, resonator, drives, space, coupling)(t);
}

/// Relative tolerance for the Raman resonance Delta_c == Delta_uw.
inline constexpr double kRamanResonanceTolerance = 1e-9;

/// Adiabatically eliminated Raman Hamiltonian for one qubit (level |2>
/// removed), valid for Delta_c == Delta_uw:
///
///   H = -[ (rabi^2/Duw) s11 + (g^2/Dc) a^+a s00
///          + (rabi g/Dc) (exp(-i phi) a^+ s01 + h.c.) ]
///
/// phi is the drive phase; at phi = 0 the flip-flop term has coefficient
/// -(rabi g/Dc) on a^+ s01 + h.c.
inline Operator effective_raman_hamiltonian(const QubitParams& q, const ResonatorParams& r, const DriveParams& d,
                                            const SpaceConfig& space) {
    q.validate();
    r.validate();
    d.validate();
    if (d.transition != Transition::t12) {
        throw ConstraintViolation("Raman drive must address the |1> <-> |2> transition");
    }
    const Detunings det = detunings(q, r, d);
    const double scale = std::max(std::abs(det.delta_c), std::abs(det.delta_uw));
    if (!(det.delta_c != 0.0 && det.delta_uw != 0.0) ||
        std::abs(det.delta_c - det.delta_uw) > kRamanResonanceTolerance * scale) {
        throw ConstraintViolation("effective Raman Hamiltonian requires Delta_c == Delta_uw != 0 (got " +
                                  std::to_string(det.delta_c) + " and " + std::to_string(det.delta_uw) + ")");
    }
    const Slot slot = slot_of(q.label);
    const Operator s11 = single_site_operator(SiteOperator::sigma(1, 1), slot, space);
    const Operator s00 = single_site_operator(SiteOperator::sigma(0, 0), slot, space);
    const Operator s01 = single_site_operator(SiteOperator::sigma(0, 1), slot, space);
    const Operator create = single_site_operator(SiteOperator::create(), Slot::resonator, space);
    const Operator n = number_operator(space);

    const Matrix flip = std::polar(d.rabi * q.g / det.delta_c, -d.phase) * (create * s01).matrix();
    Matrix h = (d.rabi * d.rabi / det.delta_uw) * s11.matrix() +
               (q.g * q.g / det.delta_c) * (n * s00).matrix() + flip + flip.adjoint();
    return {-h, true};
}

/// Resonant drive rabi (exp(i phi) |i><j| + h.c.) on the addressed qubit.
inline Operator resonant_drive_hamiltonian(const DriveParams& d, const SpaceConfig& space) {
    d.validate();
    const int i = lower_level(d.transition);
    const int j = upper_level(d.transition);
    const Matrix m =
        std::polar(d.rabi, d.phase) * single_site_operator(SiteOperator::sigma(i, j), slot_of(d.target), space).matrix();
    return {m + m.adjoint(), true};
}

/// As above, additionally checking that the carrier sits on the transition.
inline Operator resonant_drive_hamiltonian(const DriveParams& d, const QubitParams& q, const SpaceConfig& space) {
    const double w = transition_frequency(q, d.transition);
    if (d.target != q.label) {
        throw ConfigurationError("drive does not target the given qubit");
    }
    if (std::abs(w - d.omega_uw) > kRamanResonanceTolerance * w) {
        throw ConstraintViolation("drive is not resonant with the addressed transition");
    }
    return resonant_drive_hamiltonian(d, space);
}

}  // namespace fluxqit
