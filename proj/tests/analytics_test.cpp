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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "fluxqit/analytics.hpp"
#include "fluxqit/fidelity_oracle.hpp"
#include "test_support.hpp"

namespace fluxqit {
namespace {

constexpr double kPi = std::numbers::pi;

// Reference values from tests/oracles/closed_form_values.py (40-digit mpmath).
constexpr double kP10 = 0.99875041602922628;
constexpr double kP1 = 0.87909781567541791;
constexpr double kAverageEq12[] = {0.65131178904544217, 0.88634723414354295, 0.94676753878738673,
                                   0.96949442113230886, 0.98030671805498459, 0.98625950243236717,
                                   0.98987617169327789, 0.99223460228512904, 0.99385659162244363,
                                   0.99501932169884129};
constexpr double kSquaredForm10 = 0.99750447286459797;
constexpr double kTau = 1.0576695267085637e-8;

// Sphere averages by quadrature from tests/oracles/phase_shift_average.py.
constexpr double kQuadrature1 = 0.679896784462078;
constexpr double kQuadrature10 = 0.995858001934346;

TEST(RamanEvolution, ZeroTimeIsIdentity) {
    const RamanAmplitudes in{Complex(0.6, 0.1), Complex(0.0, -0.79)};
    const RamanAmplitudes out = raman_evolution(in, 1.0, 10.0, 0.0);
    EXPECT_EQ(out.c01, in.c01);
    EXPECT_EQ(out.c10, in.c10);
}

TEST(RamanEvolution, FullTransferHasUnitCoefficient) {
    const RamanAmplitudes out = raman_evolution({0.0, 1.0}, 3.0e9, 3.0e10, kPi * 3.0e10 / (2.0 * 9.0e18));
    EXPECT_EQ(out.c01, Complex(1.0, 0.0));
    EXPECT_EQ(out.c10, Complex(0.0, 0.0));
}

TEST(RamanEvolution, HalfTransfer) {
    const RamanAmplitudes out = raman_evolution({1.0, 0.0}, 1.0, 10.0, kPi * 10.0 / 4.0);
    const Complex phase = std::polar(1.0, kPi / 4.0);
    EXPECT_LE(std::abs(out.c01 - phase * std::sqrt(0.5)), 1e-15);
    EXPECT_LE(std::abs(out.c10 - phase * Complex(0.0, -std::sqrt(0.5))), 1e-15);
}

TEST(RamanEvolution, Unitary) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        const RamanAmplitudes out = raman_evolution({a / n, b / n}, 1.0 + u(rng) * 0.5, 10.0 + 5.0 * u(rng),
                                                    100.0 * std::abs(u(rng)));
        EXPECT_NEAR(std::norm(out.c01) + std::norm(out.c10), 1.0, 1e-12);
    }
}

TEST(RamanEvolution, RejectsNonPositiveDetuning) {
    EXPECT_THROW(raman_evolution({1.0, 0.0}, 1.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(raman_evolution({1.0, 0.0}, 1.0, -2.0, 1.0), DomainError);
}

TEST(RamanManifold, MatchesMatrixExponential) {
    const double g = 1.0, delta = 10.0, lambda = g * g / delta;
    for (int n : {0, 1, 2}) {
        const double m = n + 1.0;
        Eigen::Matrix2cd h;
        h << -lambda * m, lambda * std::sqrt(m), lambda * std::sqrt(m), -lambda;
        for (double t : {0.3, 7.0, 15.7}) {
            const Eigen::Matrix2cd u = (Complex(0.0, -t) * h).exp();
            const Eigen::Vector2cd in(Complex(0.6, 0.0), Complex(0.0, 0.8));
            const Eigen::Vector2cd expected = u * in;
            const RamanAmplitudes out = raman_manifold_evolution({in(0), in(1)}, g, delta, n, t);
            EXPECT_LE(std::abs(out.c01 - expected(0)), 1e-13) << n << ' ' << t;
            EXPECT_LE(std::abs(out.c10 - expected(1)), 1e-13) << n << ' ' << t;
        }
    }
    EXPECT_THROW(raman_manifold_evolution({1.0, 0.0}, g, delta, -1, 1.0), DomainError);
}

TEST(RabiRotation, FullPeriodSignFlip) {
    for (double phase : {-2.0, 0.0, 0.7, kPi}) {
        const auto [ai, aj] = rabi_rotation(1.0, 0.0, 2.0, phase, kPi / 2.0);
        EXPECT_EQ(ai, Complex(-1.0, 0.0));
        EXPECT_EQ(aj, Complex(0.0, 0.0));
    }
}

TEST(RabiRotation, QuarterPeriodMapsExactly) {
    const auto [i1, j1] = rabi_rotation(1.0, 0.0, 4.0, -kPi / 2.0, kPi / 8.0);
    EXPECT_EQ(i1, Complex(0.0, 0.0));
    EXPECT_EQ(j1, Complex(1.0, 0.0));
    const auto [i2, j2] = rabi_rotation(0.0, 1.0, 4.0, kPi / 2.0, kPi / 8.0);
    EXPECT_EQ(i2, Complex(1.0, 0.0));
    EXPECT_EQ(j2, Complex(0.0, 0.0));
}

TEST(RabiRotation, Unitary) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        const auto [x, y] = rabi_rotation(a / n, b / n, std::abs(u(rng)), u(rng), std::abs(u(rng)));
        EXPECT_NEAR(std::norm(x) + std::norm(y), 1.0, 1e-12);
    }
}

TEST(RabiRotation, DetunedReducesToResonant) {
    const auto [a, b] = rabi_rotation(Complex(0.6, 0.0), Complex(0.0, 0.8), 1.3, 0.4, 0.9);
    const auto [c, d] = detuned_rabi_rotation(Complex(0.6, 0.0), Complex(0.0, 0.8), 1.3, 0.4, 0.0, 0.0, 0.9);
    EXPECT_LE(std::abs(a - c), 1e-15);
    EXPECT_LE(std::abs(b - d), 1e-15);
}

TEST(RabiRotation, DetunedMatchesMatrixExponential) {
    Eigen::Matrix2cd h;
    const double rabi = 1.3, phase = 0.4, ei = 0.25, ej = -0.6, t = 2.1;
    h << ei, std::polar(rabi, phase), std::polar(rabi, -phase), ej;
    const Eigen::Vector2cd in(Complex(0.6, 0.0), Complex(0.0, 0.8));
    const Eigen::Vector2cd expected = (Complex(0.0, -t) * h).exp() * in;
    const auto [x, y] = detuned_rabi_rotation(in(0), in(1), rabi, phase, ei, ej, t);
    EXPECT_LE(std::abs(x - expected(0)), 1e-13);
    EXPECT_LE(std::abs(y - expected(1)), 1e-13);
}

TEST(Occupation, Values) {
    EXPECT_NEAR(occupation_p2(1.0, 10.0, 1.0, 10.0), 1.0 / 26.0, 1e-12);
    EXPECT_NEAR(occupation_p2(1.0, 10.0, 1.0, 10.0), 0.038461538461538464, 1e-15);
    EXPECT_LT(occupation_p2(1.0, 1e6, 1.0, 1e6), 1e-11);
    EXPECT_NEAR(occupation_p2(1.0, 2.0, 1.0, 2.0), 0.5, 1e-15);
    EXPECT_THROW(occupation_p2(1.0, 0.0, 1.0, 10.0), DomainError);
    EXPECT_THROW(occupation_p2(1.0, 10.0, 1.0, -1.0), DomainError);
}

TEST(PqFactors, Values) {
    const PqFactors ideal = pq_factors({0.0, 0.0, 1.0});
    EXPECT_EQ(ideal.p, 1.0);
    EXPECT_EQ(ideal.q, 1.0);
    const PqFactors ten = pq_factors({1.0, 1.0, 10.0});
    EXPECT_NEAR(ten.p, kP10, 1e-14);
    EXPECT_NEAR(ten.q, kP10, 1e-14);
    EXPECT_NEAR(pq_factors({1.0, 2.0, 1.0}).p, kP1, 1e-14);
    EXPECT_THROW(pq_factors({1.0, 1.0, 0.0}), DomainError);
    EXPECT_THROW(pq_factors({-1.0, 1.0, 1.0}), DomainError);
}

TEST(PqFactors, MonotoneAndBounded) {
    double previous = 1.0;
    for (int k = 0; k <= 100; ++k) {
        const double ratio = k / 100.0;
        const double p = pq_factor(1.0, ratio);
        EXPECT_LE(p, previous + 1e-15);
        EXPECT_LE(std::abs(p), 1.0);
        previous = p;
    }
    EXPECT_NEAR(pq_factor(1.0, 1e-6), 1.0, 1e-11);
}

TEST(Fidelity, PrintedForm) {
    EXPECT_DOUBLE_EQ(fidelity(1.0, 0.0, 0.3, 0.2), 1.0);
    EXPECT_DOUBLE_EQ(fidelity(0.0, Complex(0.0, 1.0), 0.3, 0.2), 0.3 * 0.2);
    EXPECT_NEAR(fidelity(std::sqrt(0.5), std::sqrt(0.5), 1.0, 1.0), 1.0, 1e-15);
    EXPECT_THROW(fidelity(1.0, 1.0, 1.0, 1.0), InputError);
}

TEST(AverageFidelity, Limits) {
    EXPECT_EQ(average_fidelity(1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(average_fidelity(0.0, 0.0), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(average_fidelity(0.0, 0.7), 1.0 / 3.0);
}

TEST(AverageFidelity, GridValuesAndMonotone) {
    double previous = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const PqFactors pq = pq_factors({1.0, 1.0, static_cast<double>(k)});
        const double f = average_fidelity(pq.p, pq.q);
        EXPECT_NEAR(f, kAverageEq12[k - 1], 1e-14) << k;
        EXPECT_GE(f, previous);
        previous = f;
    }
    const PqFactors pq = pq_factors({1.0, 1.0, 10.0});
    EXPECT_NEAR(average_fidelity(pq.p, pq.q), 0.99502, 1e-4);
    EXPECT_NEAR(average_fidelity_squared_form(pq.p, pq.q), kSquaredForm10, 1e-14);
}

TEST(AverageFidelity, LowerBound) {
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            EXPECT_GE(average_fidelity(i / 20.0, j / 20.0), 1.0 / 3.0);
            EXPECT_GE(average_fidelity_squared_form(i / 20.0, j / 20.0), 1.0 / 3.0);
        }
}

TEST(PhaseShiftModel, VanishesWithoutCoupling) {
    const PhaseShiftModel m = phase_shift_model(FidelityParams{0.0, 0.0, 1.0});
    ASSERT_EQ(m.shifts.size(), 6u);
    for (const auto& s : m.shifts) EXPECT_EQ(s.factor(), Complex(1.0, 0.0));
    EXPECT_EQ(m.max_abs_phase(), 0.0);
}

TEST(PhaseShiftModel, PhaseArgument) {
    const double s = 0.2, rabi = 3.0;
    const PhaseShiftModel m = phase_shift_model(FidelityParams{s, s, rabi});
    for (const auto& shift : m.shifts) {
        EXPECT_NEAR(std::abs(shift.phase()), kPi * s / (4.0 * rabi), 1e-15);
    }
    EXPECT_DOUBLE_EQ(m.rate(2, QubitLabel::a, 0), -0.5 * s);
    EXPECT_DOUBLE_EQ(m.rate(3, QubitLabel::b, 0), -0.5 * s);
    EXPECT_DOUBLE_EQ(m.rate(2, QubitLabel::b, 0), 0.0);
    EXPECT_NEAR(phase_shift_model(FidelityParams{1.0, 1.0, 10.0}).max_abs_phase(), kPi / 40.0, 1e-15);
}

TEST(PhaseShiftModel, FromSchedule) {
    const Schedule sched = testing::default_schedule();
    const PhaseShiftModel a = phase_shift_model(sched);
    const PhaseShiftModel b = phase_shift_model(sched.fidelity_params());
    ASSERT_EQ(a.shifts.size(), b.shifts.size());
    for (std::size_t k = 0; k < a.shifts.size(); ++k) EXPECT_NEAR(a.shifts[k].phase(), b.shifts[k].phase(), 1e-15);
}

TEST(TotalTime, DefaultDevice) {
    const Schedule sched = testing::default_schedule();
    const double tau = total_time(sched.qubits[0], sched.qubits[1], sched.resonator, sched.rabi_tilde);
    EXPECT_NEAR(tau, kTau, 1e-22);
    EXPECT_NEAR(tau, sched.total_time(), 1e-22);
    EXPECT_GE(tau, 1.0e-8);
    EXPECT_LE(tau, 1.1e-8);
}

TEST(TotalTime, Limits) {
    const Schedule sched = testing::default_schedule();
    const double raman_only = 2.0 * kPi * 10.0 / (2.0 * testing::kG);
    EXPECT_NEAR(total_time(sched.qubits[0], sched.qubits[1], sched.resonator, 1e30), raman_only, 1e-22);
    const Schedule doubled = testing::make_schedule(10.0, 10.0, 2.0 * testing::kG);
    EXPECT_NEAR(doubled.total_time(), 0.5 * sched.total_time(), 1e-22);
    EXPECT_THROW(total_time(sched.qubits[0], sched.qubits[1], sched.resonator, 0.0), DomainError);
    EXPECT_THROW(total_time(sched.qubits[0], sched.qubits[1], ResonatorParams{1e12}, 1.0), DomainError);
}

TEST(BlochSampling, RangesAndUniformity) {
    double mean_cos = 0.0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const BlochAngles a = sample_bloch(5, k);
        ASSERT_GE(a.theta, 0.0);
        ASSERT_LE(a.theta, kPi);
        ASSERT_GE(a.phi, 0.0);
        ASSERT_LT(a.phi, 2.0 * kPi);
        mean_cos += std::cos(a.theta) / n;
        const auto [alpha, beta] = bloch_amplitudes(a);
        ASSERT_NEAR(std::norm(alpha) + std::norm(beta), 1.0, 1e-15);
    }
    EXPECT_LT(std::abs(mean_cos), 4.0 / std::sqrt(3.0 * n));
}

TEST(MonteCarlo, IdealLimitIsOne) {
    const FidelityParams ideal{0.0, 0.0, 1.0};
    for (double f : sample_fidelities(ideal, 3, 0, 2000)) EXPECT_NEAR(f, 1.0, 1e-15);
    const MonteCarloFidelity mc = average_fidelity_mc(ideal, 2000, 3);
    EXPECT_NEAR(mc.mean, 1.0, 1e-15);
    EXPECT_LT(mc.standard_error, 1e-15);
}

TEST(MonteCarlo, DeterministicAndSplitIndependent) {
    const FidelityParams params{1.0, 1.0, 3.0};
    const MonteCarloFidelity a = average_fidelity_mc(params, 5000, 99);
    const MonteCarloFidelity b = average_fidelity_mc(params, 5000, 99);
    const MonteCarloFidelity c = average_fidelity_mc(params, 5000, 99, 3);
    const MonteCarloFidelity d = average_fidelity_mc(params, 5000, 99, 7);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.mean, c.mean);
    EXPECT_EQ(a.mean, d.mean);
    EXPECT_EQ(a.standard_error, d.standard_error);
    EXPECT_NE(a.mean, average_fidelity_mc(params, 5000, 100).mean);
    EXPECT_THROW(average_fidelity_mc(params, 999, 1), InputError);
}

TEST(MonteCarlo, StandardErrorScaling) {
    const FidelityParams params{1.0, 1.0, 2.0};
    const double se1 = average_fidelity_mc(params, 4000, 8).standard_error;
    const double se4 = average_fidelity_mc(params, 16000, 8).standard_error;
    EXPECT_NEAR(se1 / se4, 2.0, 0.2);
}

TEST(MonteCarlo, AgreesWithQuadratureOracle) {
    const MonteCarloFidelity low = average_fidelity_mc({1.0, 1.0, 1.0}, 20000, 17);
    EXPECT_LT(std::abs(low.mean - kQuadrature1), 4.0 * low.standard_error);
    const MonteCarloFidelity high = average_fidelity_mc({1.0, 1.0, 10.0}, 20000, 17);
    EXPECT_LT(std::abs(high.mean - kQuadrature10), 4.0 * high.standard_error);
}

TEST(MonteCarlo, ConsistencyFlags) {
    const FidelityConsistency c = fidelity_consistency({1.0, 1.0, 10.0}, 20000, 17);
    EXPECT_NEAR(c.printed_average, kAverageEq12[9], 1e-14);
    EXPECT_NEAR(c.squared_average, kSquaredForm10, 1e-14);
    EXPECT_LT(c.sampled.standard_error, 5e-4);
    EXPECT_EQ(c.printed_discrepant, beyond_three_sigma(c.sampled.mean, c.printed_average, c.sampled.standard_error));
    EXPECT_TRUE(beyond_three_sigma(1.0, 0.9, 0.01));
    EXPECT_FALSE(beyond_three_sigma(1.0, 0.98, 0.01));
}

}  // namespace
}  // namespace fluxqit
