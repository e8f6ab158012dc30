#include <array>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rydgate/dynamics.hpp"
#include "rydgate/gatemetrics.hpp"

using namespace rydgate;

namespace {

constexpr double pi = std::numbers::pi;

GateParams conservative() { return {10, 100, 1.0, 0}; }

PulseShape b_conservative(double tau = 1.0) { return PulseShape::protocol_b(9.80, 37.44, -12.10, tau); }

GateModel b_model(double gamma_R = 0) {
  auto g = conservative();
  g.gamma_R = gamma_R;
  return {g, b_conservative()};
}

double max_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Evolve, ConstantDiagonalPhases) {
  Eigen::VectorXd E(4);
  E << 0.3, -1.7, 2.5, 11.0;
  auto H = [&](double) -> Eigen::MatrixXcd { return E.cast<cplx>().asDiagonal(); };
  const double tau = 2.0;
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(4);
    psi0[k] = 1;
    auto tr = evolve(H, psi0, tau, {1e-10, 101, 1e-6});
    EXPECT_NEAR(std::abs(tr.final_state()[k] - std::polar(1.0, -E[k] * tau)), 0, 1e-9);
    for (std::size_t i = 0; i < tr.size(); ++i) EXPECT_NEAR(tr.phases[i][k], -E[k] * tr.times[i], 1e-8);
  }
}

TEST(Evolve, ResonantRabiTransfer) {
  const double Om = 3.0;
  auto H = [&](double) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(0, 1) = h(1, 0) = Om / 2;
    return h;
  };
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2);
  psi0[0] = 1;
  auto tr = evolve(H, psi0, pi / Om, {1e-10, 50, 1e-6});
  EXPECT_NEAR(tr.populations.back()[1], 1.0, 1e-8);
  for (std::size_t i = 0; i < tr.size(); ++i)
    EXPECT_NEAR(tr.populations[i][1], std::pow(std::sin(Om * tr.times[i] / 2), 2), 1e-8);
}

TEST(Evolve, FinalSampleAtTau) {
  auto tr = simulate(b_model(), {1e-10, 37, 1e-6});
  EXPECT_EQ(tr.size(), 37u);
  EXPECT_DOUBLE_EQ(tr.times.front(), 0.0);
  EXPECT_DOUBLE_EQ(tr.times.back(), 1.0);
  EXPECT_LT(max_diff(tr.final_state(), final_state(b_model())), 1e-8);
}

TEST(Evolve, RejectsBadInput) {
  auto H = [](double) -> Eigen::MatrixXcd { return Eigen::MatrixXcd::Identity(2, 2); };
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(2);
  EXPECT_THROW(evolve(H, psi, 1.0), Error);
  psi /= psi.norm();
  EXPECT_THROW(evolve(H, psi, 0.0), Error);
  EXPECT_THROW(evolve(H, psi, 1.0, {0.0, 10, 1e-6}), Error);
  EXPECT_THROW(GateModel(conservative(), b_conservative(0.5)), Error);
}

TEST(Evolve, StepUnderflowIsIntegrationError) {
  auto H = [](double t) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(0, 1) = h(1, 0) = 1e4 / std::pow(1.0 - t + 1e-300, 4);
    return h;
  };
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2);
  psi0[0] = 1;
  try {
    evolve(H, psi0, 1.0, {1e-10, 3, 1e-6});
    FAIL() << "expected integration error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "dynamics.integration");
    EXPECT_NE(std::string(e.what()).find("t = "), std::string::npos);
  }
}

TEST(Trajectory, NormConservedWithoutDecay) {
  auto tr = simulate(b_model());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    EXPECT_LT(std::abs(tr.norm[i] - 1), 1e-8);
    EXPECT_NEAR(tr.populations[i].sum(), tr.norm[i] * tr.norm[i], 1e-8);
  }
}

TEST(Trajectory, NormDecaysMonotonically) {
  auto tr = simulate(b_model(1 / 7.8));
  for (std::size_t i = 1; i < tr.size(); ++i) {
    EXPECT_LE(tr.norm[i], tr.norm[i - 1] + 1e-10);
    EXPECT_NEAR(tr.populations[i].sum(), tr.norm[i] * tr.norm[i], 1e-8);
  }
  EXPECT_LT(tr.norm.back(), 0.999);
}

TEST(Trajectory, GroundStateUntouched) {
  for (auto m : {b_model(), GateModel(conservative(), PulseShape::protocol_a(7.78, 47.61, 1.0)),
                 GateModel(conservative(), PulseShape::protocol_c(1.0, 100))}) {
    auto tr = simulate(m, {1e-10, 200, 1e-6});
    for (std::size_t i = 0; i < tr.size(); ++i) {
      EXPECT_NEAR(std::abs(tr.states[i][i00] - 0.5), 0, 1e-12);
      EXPECT_EQ(tr.phases[i][i00], 0.0);
    }
  }
}

TEST(Trajectory, ExchangeSymmetryForGlobalPulse) {
  auto tr = simulate(b_model());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    EXPECT_LT(std::abs(tr.populations[i][i01] - tr.populations[i][i10]), 1e-8);
    EXPECT_LT(std::abs(tr.phases[i][i01] - tr.phases[i][i10]), 1e-6);
  }
}

TEST(Trajectory, AntisymmetricSectorStaysEmpty) {
  auto tr = simulate(b_model());
  auto A = StateBasis::antisymmetric11();
  for (const auto& s : tr.states) EXPECT_LT((A.adjoint() * Vector16(s)).squaredNorm(), 1e-16);
}

TEST(Trajectory, PhasesContinuous) {
  auto tr = simulate(b_model(), {1e-10, 2000, 1e-6});
  for (std::size_t i = 1; i < tr.size(); ++i)
    for (int k : StateBasis::computational) {
      if (tr.populations[i][k] < 1e-6 || tr.populations[i - 1][k] < 1e-6) continue;
      EXPECT_LT(std::abs(tr.phases[i][k] - tr.phases[i - 1][k]), pi) << "state " << k << " sample " << i;
    }
}

TEST(Trajectory, ConvergesWhenToleranceHalved) {
  for (double tol : {1e-8, 1e-10}) {
    auto a = final_state(b_model(), tol);
    auto b = final_state(b_model(), tol / 2);
    EXPECT_LT(max_diff(a, b), tol);
  }
}

TEST(ExtractPhases, ConstantStateConstantPhase) {
  Trajectory tr;
  Eigen::VectorXcd s(3);
  s << std::polar(0.6, 1.0), std::polar(0.8, -2.0), 0.0;
  for (int i = 0; i < 5; ++i) {
    tr.times.push_back(i);
    tr.states.push_back(s);
  }
  auto ph = extract_phases(tr);
  for (const auto& p : ph) {
    EXPECT_DOUBLE_EQ(p[0], 1.0);
    EXPECT_DOUBLE_EQ(p[1], -2.0);
    EXPECT_DOUBLE_EQ(p[2], 0.0);
  }
}

TEST(ExtractPhases, UnwrapsAndHoldsBelowFloor) {
  Trajectory tr;
  const std::vector<double> arg = {3.0, 3.5, 4.0, 4.5, 5.0};
  const std::vector<double> mag = {1.0, 1.0, 1e-2, 1.0, 1.0};
  for (std::size_t i = 0; i < arg.size(); ++i) {
    Eigen::VectorXcd s(1);
    s[0] = std::polar(mag[i], arg[i]);
    tr.states.push_back(s);
  }
  auto ph = extract_phases(tr, 1e-6);
  for (std::size_t i = 0; i < arg.size(); ++i) EXPECT_NEAR(ph[i][0], arg[i], 1e-12);
  auto held = extract_phases(tr, 1e-3);
  EXPECT_NEAR(held[2][0], 3.5, 1e-12);
  EXPECT_NEAR(held[3][0], 4.5, 1e-12);
}

TEST(EntanglingPhase, Examples) {
  EXPECT_NEAR(entangling_phase(pi, 0, 0), pi, 1e-15);
  EXPECT_NEAR(entangling_phase(1.4, 0.7, 0.7), 0, 1e-15);
  EXPECT_NEAR(entangling_phase(-pi / 2, 0, 0), 1.5 * pi, 1e-15);
  EXPECT_NEAR(entangling_phase(7 * pi, 2 * pi, 0), pi, 1e-12);
  double p = entangling_phase(-1e-17, 0, 0);
  EXPECT_GE(p, 0);
  EXPECT_LT(p, 2 * pi);
}

// Blockade limit of the addressed protocol: the deviation from pi shrinks with V and stays
// within pi Omega0 / (sqrt 2 V) once the microwave splitting dominates.
TEST(EntanglingPhase, ProtocolCLargeInteractionLimit) {
  const double W = 2000;
  double prev = 1e9;
  for (double V : {100.0, 200.0, 400.0, 800.0}) {
    GateParams g{V, W, 1.0, 0};
    auto pulse = PulseShape::protocol_c(1.0, W);
    auto o = gate_outcome(final_state(GateModel(g, pulse)));
    double dev = std::abs(o.entangling_phase - pi);
    double scale = pi * pulse.Omega0() / (std::sqrt(2.0) * V);
    EXPECT_LT(dev, scale) << "V = " << V;
    EXPECT_GT(dev, 0.5 * scale) << "V = " << V;
    EXPECT_LT(dev, prev);
    prev = dev;
  }
}

TEST(Adiabatic, NoDriveGivesZero) {
  GateModel m(conservative(), PulseShape::protocol_b(0, 37.44, -12.10, 1.0));
  auto est = adiabatic_phase_estimate(hamiltonian_source(m), 1.0, 101);
  EXPECT_NEAR(est.phase, 0, 1e-12);
  for (const auto& e : est.energies)
    for (double v : e) EXPECT_NEAR(v, 0, 1e-12);
}

TEST(Adiabatic, SlowPulseMatchesEvolution) {
  GateParams g = conservative();
  g.tau = 10;
  GateModel m(g, b_conservative(10));
  auto est = adiabatic_phase_estimate(hamiltonian_source(m), g.tau, 2001);
  double exact = gate_outcome(simulate(m)).entangling_phase;
  EXPECT_LT(std::abs(std::remainder(est.phase - exact, 2 * pi)), 0.05);
}

TEST(Adiabatic, TracksAlongConservativeOptimum) {
  auto est = adiabatic_phase_estimate(hamiltonian_source(b_model()), 1.0, 2001);
  EXPECT_EQ(est.energies.size(), 2001u);
  EXPECT_GE(est.phase, 0);
  EXPECT_LT(est.phase, 2 * pi);
}

TEST(Adiabatic, AmbiguousTrackingIsReported) {
  // a sudden circulant coupling on five levels spreads |11> evenly over its eigenvectors
  const std::array<int, 5> ring = {i11, StateBasis::index(rm, rm), StateBasis::index(rp, rp),
                                   StateBasis::index(rm, g1), StateBasis::index(g1, rm)};
  auto H = [&](double t) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(16, 16);
    if (t < 0.5) return h;
    for (std::size_t k = 0; k < 5; ++k) {
      h(ring[k], ring[(k + 1) % 5]) = cplx(0, 100);
      h(ring[(k + 1) % 5], ring[k]) = cplx(0, -100);
    }
    return h;
  };
  try {
    adiabatic_phase_estimate(H, 1.0, 11);
    FAIL() << "expected tracking error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "dynamics.tracking");
  }
}

TEST(Reduced, AgreesWithFullModel) {
  auto m = b_model();
  auto full = simulate(m);
  auto red = evolve_reduced(m);
  ASSERT_EQ(full.size(), red.times.size());
  const int mm = StateBasis::index(rm, rm), m0 = StateBasis::index(rm, g0), s1 = StateBasis::index(g1, rm),
            s2 = StateBasis::index(rm, g1);
  double dev = 0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto& psi = full.states[i];
    double f[5] = {std::norm(psi[mm]), 0.5 * std::norm(psi[s1] + psi[s2]), std::norm(psi[i11]), std::norm(psi[m0]),
                   std::norm(psi[i10])};
    double r[5] = {red.p11[i][0], red.p11[i][1], red.p11[i][2], red.p10[i][0], red.p10[i][1]};
    for (int k = 0; k < 5; ++k) dev = std::max(dev, std::abs(f[k] - r[k]));
  }
  EXPECT_LT(dev, 2e-2);
}

TEST(Reduced, EliminatedLevelStaysEmpty) {
  auto tr = simulate(b_model());
  double worst = 0;
  for (const auto& p : tr.populations) {
    double ion1 = 0, ion2 = 0;
    for (int k = 0; k < 16; ++k) {
      if (StateBasis::ion1(k) == rp) ion1 += p[k];
      if (StateBasis::ion2(k) == rp) ion2 += p[k];
    }
    worst = std::max({worst, ion1, ion2});
  }
  EXPECT_LT(worst, 5e-2);
}

TEST(Reduced, RejectsAddressedPulse) {
  EXPECT_THROW(evolve_reduced(GateModel(conservative(), PulseShape::protocol_c(1.0, 100))), Error);
}
