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

// Finite Hilbert space of two three-level qubits and one truncated resonator
// mode. Slot order is fixed: qubit a, qubit b, resonator. Basis index of
// |i>_a|j>_b|n>_c is (3 i + j)(N + 1) + n.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include "fluxqit/errors.hpp"

namespace fluxqit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kQubitLevels = 3;
inline constexpr double kHermitianTolerance = 1e-12;

enum class Slot { qubit_a, qubit_b, resonator };

inline const char* to_string(Slot slot) {
    switch (slot) {
        case Slot::qubit_a: return "a";
        case Slot::qubit_b: return "b";
        case Slot::resonator: return "resonator";
    }
    return "?";
}

/// Basis label |a>_a |b>_b |n>_c.
struct BasisLabel {
    int a = 0;
    int b = 0;
    int n = 0;
    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

class SpaceConfig {
  public:
    explicit SpaceConfig(int fock_cutoff = 2) : fock_cutoff_(fock_cutoff) {
        if (fock_cutoff < 1) {
            throw ConfigurationError("fock cutoff must be >= 1 (the protocol needs |1>_c), got " +
                                     std::to_string(fock_cutoff));
        }
    }

    int fock_cutoff() const { return fock_cutoff_; }
    int fock_dim() const { return fock_cutoff_ + 1; }
    int dim() const { return kQubitLevels * kQubitLevels * fock_dim(); }

    int slot_dim(Slot slot) const { return slot == Slot::resonator ? fock_dim() : kQubitLevels; }

    bool contains(const BasisLabel& l) const {
        return l.a >= 0 && l.a < kQubitLevels && l.b >= 0 && l.b < kQubitLevels && l.n >= 0 &&
               l.n <= fock_cutoff_;
    }

    Eigen::Index index(const BasisLabel& l) const {
        if (!contains(l)) {
            throw DimensionError("basis label outside the space: |" + std::to_string(l.a) +
                                 std::to_string(l.b) + ">|" + std::to_string(l.n) + ">_c");
        }
        return (kQubitLevels * l.a + l.b) * fock_dim() + l.n;
    }

    BasisLabel label(Eigen::Index index) const {
        if (index < 0 || index >= dim()) {
            throw DimensionError("basis index out of range: " + std::to_string(index));
        }
        const int i = static_cast<int>(index);
        const int qubits = i / fock_dim();
        return {qubits / kQubitLevels, qubits % kQubitLevels, i % fock_dim()};
    }

    /// "ijn" label used in CSV headers.
    std::string label_string(Eigen::Index index) const {
        const auto l = label(index);
        return std::to_string(l.a) + std::to_string(l.b) + std::to_string(l.n);
    }

    friend bool operator==(const SpaceConfig&, const SpaceConfig&) = default;

  private:
    int fock_cutoff_;
};

/// Pure state on the full space. Immutable after construction.
class StateVector {
  public:
    StateVector(SpaceConfig space, Vector amplitudes)
        : space_(space), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != space_.dim()) {
            throw DimensionError("state length " + std::to_string(amplitudes_.size()) +
                                 " does not match space dimension " + std::to_string(space_.dim()));
        }
    }

    static StateVector basis(const SpaceConfig& space, const BasisLabel& label) {
        Vector v = Vector::Zero(space.dim());
        v(space.index(label)) = 1.0;
        return {space, std::move(v)};
    }

    const SpaceConfig& space() const { return space_; }
    const Vector& amplitudes() const { return amplitudes_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    Complex amplitude(const BasisLabel& label) const { return amplitudes_(space_.index(label)); }
    double norm() const { return amplitudes_.norm(); }

    /// <this|other>
    Complex overlap(const StateVector& other) const {
        if (other.dim() != dim()) {
            throw DimensionError("overlap of states with different dimensions");
        }
        return amplitudes_.dot(other.amplitudes_);
    }

  private:
    SpaceConfig space_;
    Vector amplitudes_;
};

/// Dense complex square matrix with a declared Hermiticity flag. A declared
/// Hermitian matrix is checked on construction.
class Operator {
  public:
    Operator() = default;

    Operator(Matrix matrix, bool hermitian) : matrix_(std::move(matrix)), hermitian_(hermitian) {
        if (matrix_.rows() != matrix_.cols()) {
            throw DimensionError("operator matrix must be square");
        }
        if (hermitian_ && hermiticity_defect() > kHermitianTolerance) {
            throw DomainError("operator flagged Hermitian deviates from its adjoint by " +
                              std::to_string(hermiticity_defect()));
        }
    }

    static Operator identity(Eigen::Index dim) { return {Matrix::Identity(dim, dim), true}; }
    static Operator zero(Eigen::Index dim) { return {Matrix::Zero(dim, dim), true}; }

    const Matrix& matrix() const { return matrix_; }
    bool hermitian() const { return hermitian_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    /// max |M - M^dagger| over elements.
    double hermiticity_defect() const {
        if (matrix_.size() == 0) return 0.0;
        return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    }

    Operator adjoint() const { return {matrix_.adjoint(), hermitian_}; }

    Operator operator+(const Operator& rhs) const {
        check_same_dim(rhs);
        return {matrix_ + rhs.matrix_, hermitian_ && rhs.hermitian_};
    }
    Operator operator-(const Operator& rhs) const {
        check_same_dim(rhs);
        return {matrix_ - rhs.matrix_, hermitian_ && rhs.hermitian_};
    }
    Operator operator*(const Operator& rhs) const {
        check_same_dim(rhs);
        return {matrix_ * rhs.matrix_, false};
    }
    Operator operator*(double s) const { return {matrix_ * s, hermitian_}; }
    Operator operator*(Complex s) const { return {matrix_ * s, hermitian_ && s.imag() == 0.0}; }

    StateVector apply(const StateVector& state) const {
        if (state.dim() != dim()) {
            throw DimensionError("operator of dimension " + std::to_string(dim()) +
                                 " applied to state of dimension " + std::to_string(state.dim()));
        }
        return {state.space(), matrix_ * state.amplitudes()};
    }

  private:
    void check_same_dim(const Operator& rhs) const {
        if (rhs.dim() != dim()) {
            throw DimensionError("operator dimensions differ: " + std::to_string(dim()) + " vs " +
                                 std::to_string(rhs.dim()));
        }
    }

    Matrix matrix_;
    bool hermitian_ = false;
};

/// Elementary single-slot operator: sigma(l, m) = |l><m| on a qubit, or the
/// resonator ladder operators, or the identity on any slot.
struct SiteOperator {
    enum class Kind { sigma, annihilate, create, identity };

    Kind kind = Kind::identity;
    int row = 0;
    int col = 0;

    static SiteOperator sigma(int l, int m) { return {Kind::sigma, l, m}; }
    static SiteOperator annihilate() { return {Kind::annihilate}; }
    static SiteOperator create() { return {Kind::create}; }
    static SiteOperator identity() { return {Kind::identity}; }
};

/// Kronecker product A (x) B; A indexes the slower-varying factor.
inline Operator tensor_product(const Operator& lhs, const Operator& rhs) {
    const Eigen::Index rb = rhs.dim();
    Matrix out(lhs.dim() * rb, lhs.dim() * rb);
    for (Eigen::Index i = 0; i < lhs.dim(); ++i) {
        for (Eigen::Index j = 0; j < lhs.dim(); ++j) {
            out.block(i * rb, j * rb, rb, rb) = lhs.matrix()(i, j) * rhs.matrix();
        }
    }
    return {std::move(out), lhs.hermitian() && rhs.hermitian()};
}

/// Kronecker product whose result must act on a factor of the given space.
inline Operator tensor_product(const Operator& lhs, const Operator& rhs, const SpaceConfig& space) {
    const Eigen::Index d = lhs.dim() * rhs.dim();
    if (d == 0 || space.dim() % d != 0) {
        throw DimensionError("tensor factor dimensions " + std::to_string(lhs.dim()) + " x " +
                             std::to_string(rhs.dim()) + " do not divide the space dimension " +
                             std::to_string(space.dim()));
    }
    return tensor_product(lhs, rhs);
}

/// The operator as it acts on its own slot only.
inline Operator local_operator(const SiteOperator& op, Slot slot, const SpaceConfig& space) {
    const int d = space.slot_dim(slot);
    Matrix m = Matrix::Zero(d, d);
    switch (op.kind) {
        case SiteOperator::Kind::identity:
            return Operator::identity(d);
        case SiteOperator::Kind::sigma:
            if (slot == Slot::resonator) {
                throw SlotMismatchError("sigma operators act on qubit slots only");
            }
            if (op.row < 0 || op.row >= kQubitLevels || op.col < 0 || op.col >= kQubitLevels) {
                throw DimensionError("sigma level out of range");
            }
            m(op.row, op.col) = 1.0;
            return {std::move(m), op.row == op.col};
        case SiteOperator::Kind::annihilate:
        case SiteOperator::Kind::create:
            if (slot != Slot::resonator) {
                throw SlotMismatchError(std::string("ladder operators act on the resonator only, not qubit ") +
                                        to_string(slot));
            }
            for (int n = 1; n < d; ++n) {
                const double amp = std::sqrt(static_cast<double>(n));
                if (op.kind == SiteOperator::Kind::annihilate) {
                    m(n - 1, n) = amp;
                } else {
                    m(n, n - 1) = amp;
                }
            }
            return {std::move(m), false};
    }
    return Operator::identity(d);
}

/// Lift a slot-local operator to the full space. Every full-space embedding
/// goes through here so the slot order lives in one place.
inline Operator embed(const Operator& local, Slot slot, const SpaceConfig& space) {
    if (local.dim() != space.slot_dim(slot)) {
        throw DimensionError("local operator dimension does not match slot " + std::string(to_string(slot)));
    }
    const Operator iq = Operator::identity(kQubitLevels);
    const Operator ic = Operator::identity(space.fock_dim());
    switch (slot) {
        case Slot::qubit_a: return tensor_product(tensor_product(local, iq), ic);
        case Slot::qubit_b: return tensor_product(tensor_product(iq, local), ic);
        case Slot::resonator: return tensor_product(tensor_product(iq, iq), local);
    }
    return Operator::identity(space.dim());
}

inline Operator single_site_operator(const SiteOperator& op, Slot slot, const SpaceConfig& space) {
    return embed(local_operator(op, slot, space), slot, space);
}

/// a^dagger a on the full space, built from the labels so the diagonal is exact.
inline Operator number_operator(const SpaceConfig& space) {
    Matrix n = Matrix::Zero(space.dim(), space.dim());
    for (Eigen::Index k = 0; k < space.dim(); ++k) n(k, k) = static_cast<double>(space.label(k).n);
    return {std::move(n), true};
}

/// Projector onto |level> of one qubit.
inline Operator level_projector(Slot qubit, int level, const SpaceConfig& space) {
    return single_site_operator(SiteOperator::sigma(level, level), qubit, space);
}

inline Complex expectation(const StateVector& state, const Operator& op) {
    if (state.dim() != op.dim()) {
        throw DimensionError("expectation: operator dimension " + std::to_string(op.dim()) +
                             " vs state dimension " + std::to_string(state.dim()));
    }
    return state.amplitudes().dot(op.matrix() * state.amplitudes());
}

/// Population of |level> on a qubit, summed over everything else. Avoids
/// building the projector.
inline double level_population(const StateVector& state, Slot qubit, int level) {
    if (qubit == Slot::resonator) throw SlotMismatchError("level_population takes a qubit slot");
    const SpaceConfig& space = state.space();
    double p = 0.0;
    for (Eigen::Index k = 0; k < state.dim(); ++k) {
        const BasisLabel l = space.label(k);
        const int q = qubit == Slot::qubit_a ? l.a : l.b;
        if (q == level) p += std::norm(state.amplitudes()(k));
    }
    return p;
}

inline double photon_number(const StateVector& state) {
    const SpaceConfig& space = state.space();
    double n = 0.0;
    for (Eigen::Index k = 0; k < state.dim(); ++k) {
        n += space.label(k).n * std::norm(state.amplitudes()(k));
    }
    return n;
}

}  // namespace fluxqit
