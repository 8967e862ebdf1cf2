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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fluxqit/errors.hpp"
#include "fluxqit/hilbert.hpp"

namespace fluxqit {

enum class IntegrationMethod { matrix_exponential, rk4 };

struct IntegratorConfig {
    IntegrationMethod method = IntegrationMethod::rk4;
    /// Fixed step for time-dependent evolution; 0 picks default_time_step().
    double dt = 0.0;
    double norm_tolerance = 1e-9;
};

inline constexpr double kDefaultStepsPerPeriod = 200.0;
inline constexpr double kMinStepsPerPeriod = 50.0;

/// 2 pi / (200 omega_max).
inline double default_time_step(double omega_max) {
    if (!(omega_max > 0.0)) throw ConfigurationError("cannot pick a time step without a frequency scale");
    return 2.0 * std::numbers::pi / (kDefaultStepsPerPeriod * omega_max);
}

/// Largest step that still resolves omega_max with 50 points per period.
inline double max_time_step(double omega_max) {
    return 2.0 * std::numbers::pi / (kMinStepsPerPeriod * omega_max);
}

inline void check_norm_drift(double drift, double tolerance) {
    if (drift > tolerance) {
        throw IntegrationError("norm drift " + std::to_string(drift) + " exceeds tolerance " +
                                   std::to_string(tolerance),
                               drift);
    }
}

/// exp(-i H t) for a constant Hermitian H, from one eigendecomposition.
class ConstantPropagator {
  public:
    explicit ConstantPropagator(const Operator& h) {
        if (!h.hermitian()) {
            throw DomainError("constant propagation requires an operator flagged Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> eig(h.matrix());
        if (eig.info() != Eigen::Success) {
            throw DomainError("eigendecomposition failed");
        }
        energies_ = eig.eigenvalues();
        vectors_ = eig.eigenvectors();
    }

    Vector apply(const Vector& psi, double duration) const {
        Vector coeffs = vectors_.adjoint() * psi;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            coeffs(k) *= std::polar(1.0, -energies_(k) * duration);
        }
        return vectors_ * coeffs;
    }

    StateVector evolve(const StateVector& state, double duration, double norm_tolerance = 1e-9) const {
        if (state.dim() != vectors_.rows()) {
            throw DimensionError("state and Hamiltonian dimensions differ");
        }
        if (duration < 0.0) throw DomainError("duration must be >= 0");
        StateVector out(state.space(), apply(state.amplitudes(), duration));
        check_norm_drift(std::abs(out.norm() - state.norm()), norm_tolerance);
        return out;
    }

  private:
    Eigen::VectorXd energies_;
    Matrix vectors_;
};

inline StateVector evolve_constant(const StateVector& state, const Operator& h, double duration,
                                   double norm_tolerance = 1e-9) {
    if (!h.hermitian()) throw DomainError("constant propagation requires an operator flagged Hermitian");
    if (duration < 0.0) throw DomainError("duration must be >= 0");
    if (duration == 0.0) return state;
    return ConstantPropagator(h).evolve(state, duration, norm_tolerance);
}

/// Anything that yields the Hamiltonian at time t.
template <class H>
concept TimeDependentHamiltonian = requires(const H& h, double t) {
    { h(t) } -> std::convertible_to<Operator>;
};

/// Hamiltonians that can act on a vector without building the matrix.
template <class H>
concept DirectlyApplicable = requires(const H& h, double t, const Vector& v, Vector& out) {
    h.apply(t, v, out);
};

/// Hamiltonians that report their fastest time scale.
template <class H>
concept FrequencyBounded = requires(const H& h) {
    { h.max_frequency() } -> std::convertible_to<double>;
};

struct NoObserver {
    void operator()(double, const Vector&) const {}
};

struct Evolution {
    StateVector state;
    double norm_drift = 0.0;  ///< max | ||psi(t)|| - ||psi(t0)|| | seen over the run
    std::size_t steps = 0;
};

/// Step actually used for h: the requested one, else the default for the
/// Hamiltonian's frequency scale. Rejects steps that under-resolve it.
template <TimeDependentHamiltonian H>
double resolve_time_step(const H& h, const IntegratorConfig& cfg) {
    if constexpr (FrequencyBounded<H>) {
        const double w = h.max_frequency();
        if (cfg.dt > 0.0) {
            if (w > 0.0 && cfg.dt > max_time_step(w) * (1.0 + 1e-12)) {
                throw ConfigurationError("time step " + std::to_string(cfg.dt) +
                                         " under-resolves the fastest frequency " + std::to_string(w));
            }
            return cfg.dt;
        }
        return w > 0.0 ? default_time_step(w) : 0.0;
    } else {
        if (!(cfg.dt > 0.0)) throw ConfigurationError("time step required for this Hamiltonian");
        return cfg.dt;
    }
}

/// Time-ordered evolution from t0 to t0 + duration with fixed-step RK4. The
/// step is shrunk so an integer number of steps covers the duration. The
/// observer sees (t, psi) at t0 and after every step. Norm is never
/// corrected; drift beyond cfg.norm_tolerance raises IntegrationError.
template <TimeDependentHamiltonian H, class Observer = NoObserver>
Evolution integrate(const StateVector& state, const H& h, double t0, double duration, const IntegratorConfig& cfg,
                    Observer&& observe = {}) {
    if (cfg.method != IntegrationMethod::rk4) {
        throw ConfigurationError("matrix-exponential propagation needs a constant Hamiltonian");
    }
    if (duration < 0.0) throw DomainError("duration must be >= 0");
    observe(t0, state.amplitudes());
    if (duration == 0.0) return {state, 0.0, 0};

    const double dt_max = resolve_time_step(h, cfg);
    const auto n = dt_max > 0.0 ? static_cast<std::size_t>(std::ceil(duration / dt_max * (1.0 - 1e-12))) : 1;
    const std::size_t steps = std::max<std::size_t>(n, 1);
    const double dt = duration / static_cast<double>(steps);

    const Complex minus_i(0.0, -1.0);
    auto rhs = [&](double t, const Vector& psi, Vector& out) {
        if constexpr (DirectlyApplicable<H>) {
            h.apply(t, psi, out);
        } else {
            const Operator op = h(t);
            if (op.dim() != psi.size()) throw DimensionError("Hamiltonian and state dimensions differ");
            out.noalias() = op.matrix() * psi;
        }
        out *= minus_i;
    };

    const double norm0 = state.norm();
    double drift = 0.0;
    Vector psi = state.amplitudes();
    Vector k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + dt * static_cast<double>(s);
        rhs(t, psi, k1);
        tmp = psi + (0.5 * dt) * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = psi + (0.5 * dt) * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = psi + dt * k3;
        rhs(t + dt, tmp, k4);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        drift = std::max(drift, std::abs(psi.norm() - norm0));
        observe(t0 + dt * static_cast<double>(s + 1), psi);
    }
    check_norm_drift(drift, cfg.norm_tolerance);
    return {StateVector(state.space(), std::move(psi)), drift, steps};
}

template <TimeDependentHamiltonian H>
StateVector evolve_time_dependent(const StateVector& state, const H& h, double t0, double duration,
                                  const IntegratorConfig& cfg) {
    return integrate(state, h, t0, duration, cfg).state;
}

using Trajectory = std::vector<std::pair<double, StateVector>>;

/// n_samples uniformly spaced states of a constant-H evolution, endpoints included.
inline Trajectory step_and_record(const StateVector& state, const Operator& h, double duration,
                                  std::size_t n_samples, double norm_tolerance = 1e-9) {
    if (n_samples < 2) throw InputError("step_and_record needs at least 2 samples");
    const ConstantPropagator prop(h);
    Trajectory out;
    out.reserve(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = duration * static_cast<double>(k) / static_cast<double>(n_samples - 1);
        out.emplace_back(t, k == 0 ? state : prop.evolve(state, t, norm_tolerance));
    }
    return out;
}

/// Time-dependent variant: integrates segment by segment between samples.
/// Times are absolute (t0 .. t0 + duration).
template <TimeDependentHamiltonian H>
Trajectory step_and_record(const StateVector& state, const H& h, double t0, double duration,
                           std::size_t n_samples, const IntegratorConfig& cfg) {
    if (n_samples < 2) throw InputError("step_and_record needs at least 2 samples");
    Trajectory out;
    out.reserve(n_samples);
    out.emplace_back(t0, state);
    const double segment = duration / static_cast<double>(n_samples - 1);
    StateVector psi = state;
    double drift = 0.0;
    for (std::size_t k = 1; k < n_samples; ++k) {
        const double start = t0 + segment * static_cast<double>(k - 1);
        Evolution ev = integrate(psi, h, start, segment, cfg);
        drift = std::abs(ev.state.norm() - state.norm());
        check_norm_drift(drift, cfg.norm_tolerance);
        psi = ev.state;
        out.emplace_back(t0 + segment * static_cast<double>(k), psi);
    }
    return out;
}

}  // namespace fluxqit
