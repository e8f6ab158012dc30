#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rydgate/gatemetrics.hpp"

using namespace rydgate;

namespace {

constexpr double pi = std::numbers::pi;

Vector16 computational_state(std::array<cplx, 4> c) {
  Vector16 psi = Vector16::Zero();
  psi[i00] = c[0];
  psi[i01] = c[1];
  psi[i10] = c[2];
  psi[i11] = c[3];
  return psi;
}

Vector16 phased_state(double theta) {
  return computational_state(
      {0.5, std::polar(0.5, theta), std::polar(0.5, theta), std::polar(0.5, 2 * theta + pi)});
}

GateModel b_conservative(double gamma_R = 0) {
  return {{10, 100, 1.0, gamma_R}, PulseShape::protocol_b(9.80, 37.44, -12.10, 1.0)};
}

}  // namespace

TEST(BellFidelity, TargetAndReferenceStates) {
  EXPECT_NEAR(bell_fidelity(computational_state({0.5, 0.5, 0.5, -0.5})), 1.0, 1e-15);
  EXPECT_NEAR(bell_fidelity(computational_state({0.5, 0.5, 0.5, 0.5})), 0.25, 1e-15);
  EXPECT_NEAR(bell_fidelity(computational_state({1, 0, 0, 0})), 0.25, 1e-15);
}

TEST(BellFidelity, NotRenormalized) {
  EXPECT_NEAR(bell_fidelity(0.9 * computational_state({0.5, 0.5, 0.5, -0.5})), 0.81, 1e-15);
}

TEST(BellFidelitySqr, RotationsCancelLocalPhases) {
  for (double theta : {0.0, 0.3, -1.2, 2.9, 5.5}) {
    auto psi = phased_state(theta);
    EXPECT_NEAR(bell_fidelity_sqr(psi, theta, theta), 1.0, 1e-14) << theta;
  }
}

TEST(BellFidelitySqr, IdentityRotationsMatchPlain) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N;
  for (int i = 0; i < 20; ++i) {
    Vector16 psi;
    for (int k = 0; k < 16; ++k) psi[k] = cplx(N(rng), N(rng));
    psi.normalize();
    EXPECT_NEAR(bell_fidelity_sqr(psi, 0, 0), bell_fidelity(psi), 1e-15);
  }
}

TEST(BellFidelitySqr, ProtocolAConservativeReference) {
  auto o = gate_outcome(final_state(GateModel({10, 100, 1.0, 0}, PulseShape::protocol_a(7.78, 47.61, 1.0))));
  EXPECT_NEAR(o.fidelity_sqr, 0.9681, 2e-3);
}

TEST(ErrorMeasures, TrivialCases) {
  auto e = error_measures({0.5, 0.5, 0.5, 0.5}, pi);
  EXPECT_NEAR(e.population, 0, 1e-15);
  EXPECT_NEAR(e.phase, 0, 1e-15);
  EXPECT_NEAR(error_measures({0.5, 0.5, 0.5, 0.5}, 0).phase, 0.75, 1e-15);
  EXPECT_NEAR(error_measures({1, 0, 0, 0}, pi).population, 0.75, 1e-15);
}

TEST(ErrorMeasures, ProtocolBConservativeReference) {
  auto o = gate_outcome(final_state(b_conservative()));
  EXPECT_GT(o.population_error, 2.2e-4 / 2);
  EXPECT_LT(o.population_error, 2.2e-4 * 2);
}

TEST(GateOutcome, BoundsHold) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  for (int i = 0; i < 50; ++i) {
    Vector16 psi;
    for (int k = 0; k < 16; ++k) psi[k] = cplx(N(rng), N(rng));
    psi.normalize();
    auto o = gate_outcome(psi);
    for (double v : {o.fidelity_plain, o.fidelity_sqr, o.population_error, o.phase_error}) {
      EXPECT_GE(v, 0);
      EXPECT_LE(v, 1);
    }
    EXPECT_GE(o.entangling_phase, 0);
    EXPECT_LT(o.entangling_phase, 2 * pi);
  }
}

TEST(GateOutcome, TrajectoryUsesUnwrappedPhases) {
  auto tr = simulate(b_conservative());
  auto a = gate_outcome(tr);
  auto b = gate_outcome(Vector16(tr.final_state()));
  EXPECT_NEAR(a.fidelity_sqr, b.fidelity_sqr, 1e-14);
  EXPECT_NEAR(a.entangling_phase, b.entangling_phase, 1e-9);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::remainder(a.phi[k] - b.phi[k], 2 * pi), 0, 1e-9);
}

TEST(DecayEstimate, TrivialLimits) {
  auto tr = simulate(b_conservative());
  EXPECT_DOUBLE_EQ(decay_fidelity_estimate(tr, 0), 1.0);

  GateModel dark({10, 100, 1.0, 0}, PulseShape::protocol_b(0, 37.44, -12.10, 1.0));
  EXPECT_DOUBLE_EQ(decay_fidelity_estimate(simulate(dark), 5.0), 1.0);
}

TEST(DecayEstimate, MarginalsCountEachIon) {
  Trajectory tr;
  tr.times = {0, 1};
  Eigen::VectorXd p = Eigen::VectorXd::Zero(16);
  p[StateBasis::index(rm, rp)] = 0.5;
  p[StateBasis::index(g1, rm)] = 0.25;
  tr.populations = {p, p};
  EXPECT_NEAR(rydberg_excitations(p), 1.25, 1e-15);
  EXPECT_NEAR(decay_fidelity_estimate(tr, 0.4), std::pow(1 - 0.2 * 1.25, 2), 1e-15);
}

TEST(DecayEstimate, AgreesWithNonHermitianEvolution) {
  const double gamma = 1 / 7.8;
  double estimate = decay_fidelity_estimate(simulate(b_conservative()), gamma);
  double exact = gate_outcome(final_state(b_conservative(gamma))).fidelity_sqr;
  EXPECT_LT(std::abs(estimate - exact), 3e-3);
}

TEST(DecayEstimate, FidelityNonIncreasingInDecayRate) {
  double prev = 2;
  for (double gamma : {0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0}) {
    double f = gate_outcome(final_state(b_conservative(gamma))).fidelity_sqr;
    EXPECT_LE(f, prev + 1e-12) << gamma;
    prev = f;
  }
}
