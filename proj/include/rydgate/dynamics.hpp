#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "rydgate/error.hpp"
#include "rydgate/model.hpp"
#include "rydgate/pulses.hpp"

namespace rydgate {

struct GateModel {
  GateParams params;
  PulseShape pulse;

  GateModel(const GateParams& p, const PulseShape& s) : params(p), pulse(s) {
    params.validate();
    if (std::abs(pulse.tau() - params.tau) > 1e-12 * params.tau)
      throw domain_error("dynamics", "pulse duration differs from gate duration");
  }
};

struct EvolveOptions {
  double tol = 1e-10;
  int samples = 1000;
  double phase_floor = 1e-6;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  std::vector<Eigen::VectorXd> populations;
  std::vector<Eigen::VectorXd> phases;  // unwrapped
  std::vector<double> norm;

  std::size_t size() const { return times.size(); }
  const Eigen::VectorXcd& final_state() const { return states.back(); }
};

inline std::vector<double> sample_grid(double tau, int samples) {
  samples = std::max(samples, 2);
  std::vector<double> t(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = tau * i / (samples - 1);
  t.back() = tau;
  return t;
}

namespace detail {

// Runge-Kutta-Fehlberg 7(8) stepping onto every requested time; obs(y, t) fires at each.
// Per-step error target is tol / 100.
template <class State, class Rhs, class Obs>
void integrate_sampled(Rhs&& rhs, State y, const std::vector<double>& times, double tol, Obs&& obs) {
  namespace ode = boost::numeric::odeint;
  if (!(tol > 0)) throw domain_error("dynamics", "tolerance must be positive");
  double last_t = times.front();
  auto sys = [&](const State& x, State& dx, double t) {
    last_t = t;
    rhs(x, dx, t);
  };
  const double eps = 1e-2 * tol;
  auto stepper = ode::make_controlled(eps, eps, ode::runge_kutta_fehlberg78<State>());
  double dt0 = (times.back() - times.front()) * 1e-4;
  try {
    ode::integrate_times(stepper, sys, y, times.begin(), times.end(), dt0, obs, ode::max_step_checker(1000000));
  } catch (const ode::odeint_error& e) {
    std::ostringstream msg;
    msg << "integrator failed near t = " << last_t << ": " << e.what();
    throw integration_error("dynamics", msg.str());
  }
}

inline double wrap_pi(double x) { return std::remainder(x, 2 * std::numbers::pi); }

}  // namespace detail

// Nearest-branch unwrapping, held at the last valid value while the population is below floor.
inline std::vector<Eigen::VectorXd> extract_phases(const Trajectory& traj, double phase_floor = 1e-6) {
  std::vector<Eigen::VectorXd> out;
  if (traj.states.empty()) return out;
  const auto dim = traj.states.front().size();
  Eigen::VectorXd cur = Eigen::VectorXd::Zero(dim);
  std::vector<bool> seen(static_cast<std::size_t>(dim), false);
  out.reserve(traj.size());
  for (const auto& s : traj.states) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (std::norm(s[k]) < phase_floor) continue;
      double a = std::arg(s[k]);
      auto f = seen[static_cast<std::size_t>(k)];
      cur[k] = f ? cur[k] + detail::wrap_pi(a - cur[k]) : a;
      seen[static_cast<std::size_t>(k)] = true;
    }
    out.push_back(cur);
  }
  return out;
}

inline void fill_observables(Trajectory& tr, double phase_floor) {
  tr.populations.clear();
  tr.norm.clear();
  for (const auto& s : tr.states) {
    tr.populations.push_back(s.cwiseAbs2());
    tr.norm.push_back(s.norm());
  }
  tr.phases = extract_phases(tr, phase_floor);
}

using HamiltonianSource = std::function<Eigen::MatrixXcd(double)>;

// i dpsi/dt = H(t) psi on [0, tau]
inline Trajectory evolve(const HamiltonianSource& H_of_t, const Eigen::VectorXcd& psi0, double tau,
                         const EvolveOptions& opt = {}) {
  if (!(tau > 0)) throw domain_error("dynamics", "tau must be positive");
  if (std::abs(psi0.norm() - 1) > 1e-12) throw domain_error("dynamics", "initial state must be normalized");
  using State = std::vector<cplx>;
  const auto n = psi0.size();
  State y(psi0.data(), psi0.data() + n);
  Trajectory tr;
  tr.times = sample_grid(tau, opt.samples);
  auto rhs = [&](const State& x, State& dx, double t) {
    t = std::clamp(t, 0.0, tau);
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), n);
    Eigen::Map<Eigen::VectorXcd> dv(dx.data(), n);
    dv = cplx(0, -1) * (H_of_t(t) * xv);
  };
  detail::integrate_sampled(rhs, y, tr.times, opt.tol, [&](const State& x, double) {
    tr.states.emplace_back(Eigen::Map<const Eigen::VectorXcd>(x.data(), n));
  });
  fill_observables(tr, opt.phase_floor);
  return tr;
}

inline Vector16 equal_superposition() {
  Vector16 psi = Vector16::Zero();
  for (int k : StateBasis::computational) psi[k] = 0.5;
  return psi;
}

namespace detail {

using GateState = std::array<cplx, 16>;

struct GateRhs {
  const GateHamiltonian& H;
  const PulseShape& pulse;

  void operator()(const GateState& x, GateState& dx, double t) const {
    t = std::clamp(t, 0.0, pulse.tau());
    Eigen::Map<const Vector16> xv(x.data());
    Vector16 out;
    H.apply(drive(pulse, t), xv, out);
    for (int k = 0; k < 16; ++k) dx[static_cast<std::size_t>(k)] = cplx(out[k].imag(), -out[k].real());
  }
};

}  // namespace detail

// Gate evolution on the sparse two-ion operator; samples on a uniform grid.
inline Trajectory simulate(const GateModel& m, const EvolveOptions& opt = {},
                           const Vector16& psi0 = equal_superposition()) {
  GateHamiltonian H(m.params);
  detail::GateState y;
  std::copy(psi0.data(), psi0.data() + 16, y.begin());
  Trajectory tr;
  tr.times = sample_grid(m.params.tau, opt.samples);
  detail::integrate_sampled(detail::GateRhs{H, m.pulse}, y, tr.times, opt.tol,
                            [&](const detail::GateState& x, double) {
                              tr.states.emplace_back(Eigen::Map<const Vector16>(x.data()));
                            });
  fill_observables(tr, opt.phase_floor);
  return tr;
}

// Final state only; the cheap path used by optimizer objectives.
inline Vector16 final_state(const GateModel& m, double tol = 1e-10, const Vector16& psi0 = equal_superposition()) {
  GateHamiltonian H(m.params);
  detail::GateState y;
  std::copy(psi0.data(), psi0.data() + 16, y.begin());
  Vector16 out;
  detail::integrate_sampled(detail::GateRhs{H, m.pulse}, y, {0.0, m.params.tau}, tol,
                            [&](const detail::GateState& x, double) { out = Eigen::Map<const Vector16>(x.data()); });
  return out;
}

inline HamiltonianSource hamiltonian_source(const GateModel& m) {
  auto H = std::make_shared<GateHamiltonian>(m.params);
  PulseShape pulse = m.pulse;
  return [H, pulse](double t) -> Eigen::MatrixXcd { return H->dense(drive(pulse, std::clamp(t, 0.0, pulse.tau()))); };
}

// [phi11 - phi10 - phi01] mod 2 pi in [0, 2 pi)
inline double entangling_phase(double phi11, double phi10, double phi01) {
  double p = std::fmod(phi11 - phi10 - phi01, 2 * std::numbers::pi);
  if (p < 0) p += 2 * std::numbers::pi;
  if (p >= 2 * std::numbers::pi) p = 0;
  return p;
}

inline double entangling_phase(const Trajectory& tr, std::size_t sample) {
  const auto& ph = tr.phases.at(sample);
  constexpr int i11 = StateBasis::index(g1, g1), i10 = StateBasis::index(g1, g0), i01 = StateBasis::index(g0, g1);
  return entangling_phase(ph[i11], ph[i10], ph[i01]);
}

namespace detail {

// indices reachable from `start` through nonzero couplings of any of the sampled matrices
inline std::vector<int> coupled_block(const std::vector<Eigen::MatrixXcd>& Hs, int start) {
  const auto n = Hs.front().rows();
  Eigen::MatrixXd pattern = Eigen::MatrixXd::Zero(n, n);
  for (const auto& H : Hs) pattern += H.cwiseAbs();
  std::vector<int> block{start};
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  in[static_cast<std::size_t>(start)] = true;
  for (std::size_t q = 0; q < block.size(); ++q)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!in[static_cast<std::size_t>(j)] && pattern(block[q], j) > 0) {
        in[static_cast<std::size_t>(j)] = true;
        block.push_back(static_cast<int>(j));
      }
  std::sort(block.begin(), block.end());
  return block;
}

}  // namespace detail

struct AdiabaticEstimate {
  double phase;  // [0, 2 pi)
  std::vector<double> times;
  std::vector<std::array<double, 3>> energies;  // eps11, eps10, eps01
};

// Integrates the instantaneous eigenenergies connected to |11>, |10>, |01>. The result follows
// the amplitude convention c = |c| e^{i phi}, i.e. phi* = -int (eps11 - eps10 - eps01) dt.
inline AdiabaticEstimate adiabatic_phase_estimate(const HamiltonianSource& H_of_t, double tau,
                                                  int quadrature_points = 2001) {
  if (quadrature_points < 3) throw domain_error("dynamics", "need at least 3 quadrature points");
  auto t = sample_grid(tau, quadrature_points);
  std::vector<Eigen::MatrixXcd> Hs;
  Hs.reserve(t.size());
  for (double ti : t) Hs.push_back(H_of_t(ti));

  constexpr std::array<int, 3> targets = {StateBasis::index(g1, g1), StateBasis::index(g1, g0),
                                          StateBasis::index(g0, g1)};
  AdiabaticEstimate est;
  est.times = t;
  est.energies.assign(t.size(), {0, 0, 0});
  for (std::size_t k = 0; k < 3; ++k) {
    auto block = detail::coupled_block(Hs, targets[k]);
    const auto d = static_cast<Eigen::Index>(block.size());
    Eigen::VectorXcd prev = Eigen::VectorXcd::Zero(d);
    prev[std::find(block.begin(), block.end(), targets[k]) - block.begin()] = 1;
    double prev_e = Hs.front()(targets[k], targets[k]).real();
    for (std::size_t i = 0; i < t.size(); ++i) {
      Eigen::MatrixXcd h(d, d);
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) h(a, b) = Hs[i](block[a], block[b]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      Eigen::Index best = -1;
      double best_ov = -1;
      for (Eigen::Index c = 0; c < d; ++c) {
        double ov = std::abs(es.eigenvectors().col(c).dot(prev));
        bool tie = best >= 0 && std::abs(ov - best_ov) < 1e-9;
        if (ov > best_ov + 1e-9 ||
            (tie && std::abs(es.eigenvalues()[c] - prev_e) < std::abs(es.eigenvalues()[best] - prev_e))) {
          best = c;
          best_ov = ov;
        }
      }
      if (best_ov < 0.5) {
        std::ostringstream msg;
        msg << "lost track of the state adiabatically connected to |" << StateBasis::label(targets[k])
            << "> at t = " << t[i] << " (overlap " << best_ov << ")";
        throw tracking_error("dynamics", msg.str());
      }
      prev = es.eigenvectors().col(best);
      prev_e = es.eigenvalues()[best];
      est.energies[i][k] = prev_e;
    }
  }
  double integral = 0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    auto f = [&](std::size_t j) { return est.energies[j][0] - est.energies[j][1] - est.energies[j][2]; };
    integral += 0.5 * (f(i) + f(i + 1)) * (t[i + 1] - t[i]);
  }
  est.phase = entangling_phase(-integral, 0, 0);
  return est;
}

struct ReducedTrajectory {
  std::vector<double> times;
  std::vector<std::array<double, 3>> p11;  // |-->, |S_->, |11>
  std::vector<std::array<double, 2>> p10;  // |-0>, |10>
};

// Adiabatically reduced 3x3 and 2x2 models driven by the same global pulse.
inline ReducedTrajectory evolve_reduced(const GateModel& m, const EvolveOptions& opt = {}) {
  if (m.pulse.addressed()) throw domain_error("dynamics", "reduced model needs a global pulse");
  const double V = mhz_to_rad_us(m.params.V), W = mhz_to_rad_us(m.params.Omega_MW);
  auto dimless = [&](double t) {
    Drive d = drive(m.pulse, std::clamp(t, 0.0, m.pulse.tau()));
    double D = mhz_to_rad_us(d.Delta1);
    return std::make_pair(dimensionless(V, W, mhz_to_rad_us(d.Omega1), D), D);
  };
  auto H11 = [&](double t) -> Eigen::MatrixXcd {
    auto [q, D] = dimless(t);
    return (D * reduce_h11(q.eps_p, q.eps_m, q.delta, q.eta)).cast<cplx>();
  };
  auto H10 = [&](double t) -> Eigen::MatrixXcd {
    auto [q, D] = dimless(t);
    return (D * reduce_h10(q.eps_p, q.eps_m, q.delta)).cast<cplx>();
  };
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(3), b = Eigen::VectorXcd::Zero(2);
  a[2] = 1;
  b[1] = 1;
  auto t11 = evolve(H11, a, m.params.tau, opt);
  auto t10 = evolve(H10, b, m.params.tau, opt);
  ReducedTrajectory r;
  r.times = t11.times;
  // weights of |11> and |10> in the equal superposition
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const auto& p = t11.populations[i];
    const auto& q = t10.populations[i];
    r.p11.push_back({0.25 * p[0], 0.25 * p[1], 0.25 * p[2]});
    r.p10.push_back({0.25 * q[0], 0.25 * q[1]});
  }
  return r;
}

}  // namespace rydgate
