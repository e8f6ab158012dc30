#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "rydgate/dynamics.hpp"
#include "rydgate/model.hpp"

namespace rydgate {

constexpr int i00 = StateBasis::index(g0, g0);
constexpr int i01 = StateBasis::index(g0, g1);
constexpr int i10 = StateBasis::index(g1, g0);
constexpr int i11 = StateBasis::index(g1, g1);

struct GateOutcome {
  std::array<double, 4> c{};    // |c_00|, |c_01|, |c_10|, |c_11|
  std::array<double, 4> phi{};  // phi_00 ... phi_11
  double fidelity_plain = 0;
  double fidelity_sqr = 0;
  double population_error = 0;
  double phase_error = 0;
  double entangling_phase = 0;
};

// |<Psi_B|psi>|^2 with Psi_B = (|00> + |01> + |10> - |11>)/2; no renormalization
inline double bell_fidelity(const Vector16& psi) {
  cplx ov = 0.5 * (psi[i00] + psi[i01] + psi[i10] - psi[i11]);
  return std::norm(ov);
}

// applies R_2(phi01) R_1(phi10), R_i(phi) = e^{-i phi}|1><1| + |0><0|, before the overlap
inline double bell_fidelity_sqr(const Vector16& psi, double phi10, double phi01) {
  auto r = [](double p) { return std::polar(1.0, -p); };
  cplx ov = 0.5 * (psi[i00] + psi[i01] * r(phi01) + psi[i10] * r(phi10) - psi[i11] * r(phi10 + phi01));
  return std::norm(ov);
}

struct ErrorMeasures {
  double population;
  double phase;
};

inline ErrorMeasures error_measures(const std::array<double, 4>& c, double phi_star) {
  double s = c[0] + c[1] + c[2] + c[3];
  double p = 1 - 0.25 * s * s;
  double q = 1 - std::norm(3.0 - std::polar(1.0, phi_star)) / 16;
  return {p, q};
}

inline GateOutcome gate_outcome(const Vector16& psi) {
  GateOutcome g;
  const std::array<int, 4> idx = {i00, i01, i10, i11};
  for (int k = 0; k < 4; ++k) {
    g.c[k] = std::abs(psi[idx[k]]);
    g.phi[k] = std::arg(psi[idx[k]]);
  }
  g.fidelity_plain = bell_fidelity(psi);
  g.fidelity_sqr = bell_fidelity_sqr(psi, g.phi[2], g.phi[1]);
  g.entangling_phase = entangling_phase(g.phi[3], g.phi[2], g.phi[1]);
  auto e = error_measures(g.c, g.entangling_phase);
  g.population_error = e.population;
  g.phase_error = e.phase;
  return g;
}

// uses the unwrapped phases at the final sample
inline GateOutcome gate_outcome(const Trajectory& tr) {
  GateOutcome g = gate_outcome(Vector16(tr.final_state()));
  const auto& ph = tr.phases.back();
  g.phi = {ph[i00], ph[i01], ph[i10], ph[i11]};
  return g;
}

// summed per-ion Rydberg populations, marginalized from the two-ion state
inline double rydberg_excitations(const Eigen::VectorXd& populations) {
  double s = 0;
  for (int k = 0; k < 16; ++k) s += StateBasis::rydberg_count(k) * populations[k];
  return s;
}

// |1 - (gamma_R / 2) int sum_i (p_+^i + p_-^i) dt|^2 over a decay-free trajectory
inline double decay_fidelity_estimate(const Trajectory& tr, double gamma_R) {
  double integral = 0;
  for (std::size_t i = 0; i + 1 < tr.size(); ++i)
    integral += 0.5 * (rydberg_excitations(tr.populations[i]) + rydberg_excitations(tr.populations[i + 1])) *
                (tr.times[i + 1] - tr.times[i]);
  double a = 1 - 0.5 * gamma_R * integral;
  return a * a;
}

}  // namespace rydgate
