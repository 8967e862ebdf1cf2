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

#include "fluxqit/model.hpp"
#include "fluxqit/propagator.hpp"
#include "fluxqit/protocol.hpp"
#include "test_support.hpp"

namespace fluxqit {
namespace {

constexpr double kPi = std::numbers::pi;

// Scale-free device: g = 1, Dc = 10, omega12 placed so Duw = Dc at carrier 40.
const QubitParams kQa{110.0, 50.0, 1.0, QubitLabel::a};
const QubitParams kQb{112.0, 52.0, 1.0, QubitLabel::b};
const ResonatorParams kRes{100.0};

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

TEST(QubitParams, Validation) {
    EXPECT_NO_THROW(kQa.validate());
    EXPECT_THROW((QubitParams{50.0, 60.0, 1.0}).validate(), ConfigurationError);
    EXPECT_THROW((QubitParams{60.0, 0.0, 1.0}).validate(), ConfigurationError);
    EXPECT_THROW((QubitParams{60.0, 50.0, 0.0}).validate(), ConfigurationError);
    EXPECT_THROW((ResonatorParams{0.0}).validate(), ConfigurationError);
}

TEST(DriveParams, Validation) {
    EXPECT_THROW((DriveParams{QubitLabel::a, Transition::t12, 1.0, -1.0, 0.0}).validate(), ConfigurationError);
    EXPECT_THROW((DriveParams{QubitLabel::a, Transition::t12, 1.0, 1.0, -kPi}).validate(), ConfigurationError);
    EXPECT_NO_THROW((DriveParams{QubitLabel::a, Transition::t12, 1.0, 1.0, kPi}).validate());
}

TEST(Detunings, Definitions) {
    const DriveParams d{QubitLabel::a, Transition::t12, 40.0, 1.0, 0.0};
    const Detunings det = detunings(kQa, kRes, d);
    EXPECT_DOUBLE_EQ(det.delta_c, 10.0);
    EXPECT_DOUBLE_EQ(det.delta_uw, 10.0);

    const QubitParams on_resonance{100.0, 50.0, 1.0, QubitLabel::a};
    EXPECT_EQ(detunings(on_resonance, kRes, d).delta_c, 0.0);

    const DriveParams d02{QubitLabel::a, Transition::t02, 109.0, 1.0, 0.0};
    EXPECT_DOUBLE_EQ(detunings(kQa, kRes, d02).delta_uw, 1.0);
}

TEST(Detunings, TargetMismatch) {
    const DriveParams d{QubitLabel::b, Transition::t12, 40.0, 1.0, 0.0};
    EXPECT_THROW(detunings(kQa, kRes, d), ConfigurationError);
}

TEST(Detunings, Deterministic) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1.0, 100.0);
    for (int k = 0; k < 20; ++k) {
        const QubitParams q{200.0 + u(rng), u(rng), u(rng), QubitLabel::b};
        const DriveParams d{QubitLabel::b, Transition::t02, u(rng), u(rng), 0.0};
        const ResonatorParams r{u(rng)};
        const Detunings x = detunings(q, r, d);
        const Detunings y = detunings(q, r, d);
        EXPECT_EQ(x.delta_c, y.delta_c);
        EXPECT_EQ(x.delta_uw, y.delta_uw);
    }
}

TEST(FullHamiltonian, ZeroWithoutCouplingOrDrives) {
    const SpaceConfig space;
    const Operator h = full_interaction_hamiltonian(0.3, {kQa, kQb}, kRes, {}, space, {false, false});
    EXPECT_EQ(max_abs(h.matrix()), 0.0);
}

TEST(FullHamiltonian, HermitianAtSampledTimes) {
    const SpaceConfig space;
    const std::vector<DriveParams> drives{{QubitLabel::a, Transition::t12, 40.0, 1.0, kPi},
                                          {QubitLabel::b, Transition::t02, 111.0, 3.0, -0.5 * kPi}};
    const InteractionHamiltonian h({kQa, kQb}, kRes, drives, space);
    for (double t : {0.0, 0.1, 1.7, 12.3, 400.9}) {
        const Operator op = h(t);
        EXPECT_TRUE(op.hermitian());
        EXPECT_LE(op.hermiticity_defect(), 1e-12);
    }
}

TEST(FullHamiltonian, DirectApplyMatchesMatrix) {
    const SpaceConfig space;
    const std::vector<DriveParams> drives{{QubitLabel::a, Transition::t12, 40.0, 1.0, kPi},
                                          {QubitLabel::b, Transition::t12, 52.0, 2.0, 0.5 * kPi}};
    const InteractionHamiltonian h({kQa, kQb}, kRes, drives, space);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> d;
    Vector psi(space.dim());
    for (auto& x : psi) x = Complex(d(rng), d(rng));
    Vector out;
    for (double t : {0.0, 0.37, 5.0}) {
        h.apply(t, psi, out);
        EXPECT_LE((out - h(t).matrix() * psi).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(FullHamiltonian, PeriodicInDetuning) {
    const SpaceConfig space;
    const double period = 2.0 * kPi / 10.0;
    for (double t : {0.0, 0.25, 3.1}) {
        const Matrix h0 = full_interaction_hamiltonian(t, {kQa, kQb}, kRes, {}, space, {true, false}).matrix();
        const Matrix h1 =
            full_interaction_hamiltonian(t + period, {kQa, kQb}, kRes, {}, space, {true, false}).matrix();
        EXPECT_LE(max_abs(h1 - h0), 1e-12);
    }
}

TEST(FullHamiltonian, TwoQubitAdditivity) {
    const SpaceConfig space;
    const DriveParams drive{QubitLabel::a, Transition::t12, 40.0, 0.7, 0.3};
    const Operator ad = single_site_operator(SiteOperator::create(), Slot::resonator, space);
    const Operator s02 = single_site_operator(SiteOperator::sigma(0, 2), Slot::qubit_a, space);
    const Operator s12 = single_site_operator(SiteOperator::sigma(1, 2), Slot::qubit_a, space);
    for (double t : {0.0, 0.4, 2.2}) {
        const Matrix coupling = kQa.g * std::polar(1.0, -10.0 * t) * (ad * s02).matrix();
        const Matrix drive_part = 0.7 * std::polar(1.0, 0.3 - 10.0 * t) * s12.matrix();
        const Matrix expected = coupling + coupling.adjoint() + drive_part + drive_part.adjoint();
        const Matrix h = full_interaction_hamiltonian(t, {kQa, kQb}, kRes, {drive}, space, {true, false}).matrix();
        EXPECT_LE(max_abs(h - expected), 1e-14);
    }
}

TEST(FullHamiltonian, JaynesCummingsRabiFlop) {
    const SpaceConfig space;
    const QubitParams resonant{100.0, 50.0, 1.0, QubitLabel::a};
    const InteractionHamiltonian h({resonant, kQb}, kRes, {}, space, {true, false});
    EXPECT_EQ(h.max_rotating_frequency(), 0.0);
    const StateVector start = StateVector::basis(space, {2, 1, 0});
    const IntegratorConfig cfg{IntegrationMethod::rk4, 1e-3, 1e-9};
    const Trajectory traj = step_and_record(start, h, 0.0, kPi, 41, cfg);
    for (const auto& [t, s] : traj) {
        EXPECT_NEAR(std::norm(s.amplitude({2, 1, 0})), std::pow(std::cos(t), 2), 1e-9);
        EXPECT_NEAR(std::norm(s.amplitude({0, 1, 1})), std::pow(std::sin(t), 2), 1e-9);
    }
    // Full flop |2,0> -> |0,1> at g t = pi/2.
    const StateVector half = evolve_time_dependent(start, h, 0.0, 0.5 * kPi, cfg);
    EXPECT_NEAR(std::norm(half.amplitude({0, 1, 1})), 1.0, 1e-9);
}

TEST(FullHamiltonian, DriveConventionReducesToResonantForm) {
    const SpaceConfig space;
    const DriveParams d{QubitLabel::b, Transition::t12, kQb.omega12, 2.5, -0.5 * kPi};
    const Matrix full = full_interaction_hamiltonian(1.3, {kQa, kQb}, kRes, {d}, space, {false, false}).matrix();
    EXPECT_LE(max_abs(full - resonant_drive_hamiltonian(d, space).matrix()), 1e-14);
}

TEST(EffectiveRaman, StarkTermOnlyWithoutDrive) {
    const SpaceConfig space;
    const DriveParams d{QubitLabel::a, Transition::t12, 40.0, 0.0, 0.0};
    const Matrix h = effective_raman_hamiltonian(kQa, kRes, d, space).matrix();
    const Matrix stark = -(1.0 / 10.0) * (number_operator(space) *
                                          single_site_operator(SiteOperator::sigma(0, 0), Slot::qubit_a, space))
                                             .matrix();
    EXPECT_LE(max_abs(h - stark), 1e-15);
}

TEST(EffectiveRaman, FlipFlopCoefficient) {
    const SpaceConfig space;
    const DriveParams d{QubitLabel::a, Transition::t12, 40.0, 1.0, 0.0};
    const Operator h = effective_raman_hamiltonian(kQa, kRes, d, space);
    const Complex c = h.matrix()(space.index({0, 0, 1}), space.index({1, 0, 0}));
    EXPECT_NEAR(std::abs(c), 0.1, 1e-15);
    EXPECT_NEAR(c.real(), -0.1, 1e-15);
    // Drive phase pi flips the sign.
    const DriveParams dpi{QubitLabel::a, Transition::t12, 40.0, 1.0, kPi};
    const Complex cpi = effective_raman_hamiltonian(kQa, kRes, dpi, space).matrix()(space.index({0, 0, 1}),
                                                                                     space.index({1, 0, 0}));
    EXPECT_NEAR(cpi.real(), 0.1, 1e-15);
    EXPECT_NEAR(cpi.imag(), 0.0, 1e-15);
}

TEST(EffectiveRaman, TransfersPhotonToQubit) {
    const SpaceConfig space;
    const DriveParams d{QubitLabel::a, Transition::t12, 40.0, 1.0, kPi};
    const Operator h = effective_raman_hamiltonian(kQa, kRes, d, space);
    const StateVector out = evolve_constant(StateVector::basis(space, {0, 1, 1}), h, kPi * 10.0 / 2.0);
    EXPECT_NEAR(std::norm(out.amplitude({1, 1, 0})), 1.0, 1e-12);
}

TEST(EffectiveRaman, ConstraintViolations) {
    const SpaceConfig space;
    const DriveParams off{QubitLabel::a, Transition::t12, 41.0, 1.0, 0.0};
    EXPECT_THROW(effective_raman_hamiltonian(kQa, kRes, off, space), ConstraintViolation);
    const DriveParams wrong{QubitLabel::a, Transition::t02, 100.0, 1.0, 0.0};
    EXPECT_THROW(effective_raman_hamiltonian(kQa, kRes, wrong, space), ConstraintViolation);
    const QubitParams on_resonance{100.0, 50.0, 1.0, QubitLabel::a};
    const DriveParams carrier{QubitLabel::a, Transition::t12, 50.0, 1.0, 0.0};
    EXPECT_THROW(effective_raman_hamiltonian(on_resonance, kRes, carrier, space), ConstraintViolation);
}

TEST(ResonantDrive, ZeroRabi) {
    const SpaceConfig space;
    const DriveParams d{QubitLabel::a, Transition::t02, 110.0, 0.0, 0.3};
    EXPECT_EQ(max_abs(resonant_drive_hamiltonian(d, space).matrix()), 0.0);
}

TEST(ResonantDrive, QuarterPeriodMapsExactly) {
    const SpaceConfig space;
    const double rabi = 10.0;
    const double t = kPi / (2.0 * rabi);
    const DriveParams down{QubitLabel::a, Transition::t02, 110.0, rabi, -0.5 * kPi};
    const StateVector up = evolve_constant(StateVector::basis(space, {0, 1, 0}),
                                           resonant_drive_hamiltonian(down, space), t);
    EXPECT_LE(std::abs(up.amplitude({2, 1, 0}) - Complex(1.0, 0.0)), 1e-12);

    const DriveParams back{QubitLabel::a, Transition::t02, 110.0, rabi, 0.5 * kPi};
    const StateVector ret = evolve_constant(StateVector::basis(space, {2, 1, 0}),
                                            resonant_drive_hamiltonian(back, space), t);
    EXPECT_LE(std::abs(ret.amplitude({0, 1, 0}) - Complex(1.0, 0.0)), 1e-12);
}

TEST(ResonantDrive, ResonanceChecked) {
    const SpaceConfig space;
    const DriveParams d{QubitLabel::a, Transition::t12, 49.0, 1.0, 0.0};
    EXPECT_THROW(resonant_drive_hamiltonian(d, kQa, space), ConstraintViolation);
    const DriveParams other{QubitLabel::b, Transition::t12, 50.0, 1.0, 0.0};
    EXPECT_THROW(resonant_drive_hamiltonian(other, kQa, space), ConfigurationError);
}

// Step-1 full-engine error against the closed form shrinks as Dc/g grows.
TEST(AdiabaticElimination, InfidelityDecreasesWithDetuning) {
    double previous = 1.0;
    for (double ratio : {10.0, 20.0, 40.0}) {
        const Schedule s = testing::make_schedule(ratio, ratio);
        const StateVector in = StateVector::basis(s.space, {1, 1, 0});
        const StepOutcome analytic = run_step(in, s, 0, Engine::analytic, {});
        IntegratorConfig cfg;
        cfg.dt = schedule_time_step(s);
        const StepOutcome full = run_step(in, s, 0, Engine::full, cfg);
        const double err = testing::infidelity(analytic.state, full.state);
        EXPECT_LT(err, previous) << "ratio " << ratio;
        previous = err;
    }
}

}  // namespace
}  // namespace fluxqit
