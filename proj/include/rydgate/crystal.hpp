#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "rydgate/atomic/radial.hpp"
#include "rydgate/error.hpp"
#include "rydgate/units.hpp"

namespace rydgate::crystal {

struct TrapParams {
  double omega = 0;  // axial angular frequency, rad/s
  double gamma = 1;  // radial/axial anisotropy
  int N = 1;
  double M = 0;  // kg

  void validate() const {
    if (!(omega > 0) || !(gamma > 0) || N < 1 || !(M > 0))
      throw domain_error("crystal", "trap needs omega > 0, gamma > 0, N >= 1, M > 0");
  }
};

inline double critical_anisotropy(int N) {
  if (N < 2) throw domain_error("crystal", "critical anisotropy needs N >= 2");
  return 0.583 * std::pow(static_cast<double>(N), 0.9);
}

// Fitted gap laws a / N^b + c used for the Newton starting point.
inline double max_gap_law(int N) { return 1.246 / std::pow(N, 0.404) + 0.286; }
inline double mean_gap_law(int N) { return 1.823 / std::pow(N, 0.388) - 0.115; }

// dZ_i = Z_i - sum_j sign(Z_i - Z_j) / Z_ij^2
inline Eigen::VectorXd equilibrium_residual(const Eigen::VectorXd& Z) {
  const auto N = Z.size();
  Eigen::VectorXd F = Z;
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i == j) continue;
      double d = Z[i] - Z[j];
      F[i] -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  return F;
}

// Damped Newton from a uniform guess. The Jacobian of the residual is I + 2K.
inline Eigen::VectorXd equilibrium_positions(int N, double tol = 1e-12, int max_iter = 200) {
  if (N < 1) throw domain_error("crystal", "need N >= 1");
  Eigen::VectorXd Z(N);
  if (N == 1) return Eigen::VectorXd::Zero(1);
  double half = 0.5 * (N - 1) * std::min(mean_gap_law(N), max_gap_law(N));
  if (N <= 3) half = 0.5 * (N - 1);
  for (int i = 0; i < N; ++i) Z[i] = -half + 2 * half * i / (N - 1);

  auto F = equilibrium_residual(Z);
  double res = F.cwiseAbs().maxCoeff();
  for (int it = 0; it < max_iter && res > tol; ++it) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        double c = 2.0 / std::pow(std::abs(Z[i] - Z[j]), 3);
        J(i, i) += c;
        J(i, j) -= c;
      }
    Eigen::VectorXd step = J.ldlt().solve(F);
    double lambda = 1.0;
    Eigen::VectorXd trial;
    double trial_res = res;
    for (int h = 0; h < 40; ++h, lambda *= 0.5) {
      trial = Z - lambda * step;
      bool ordered = true;
      for (int i = 0; i + 1 < N; ++i) ordered = ordered && trial[i] < trial[i + 1];
      if (!ordered) continue;
      trial_res = equilibrium_residual(trial).cwiseAbs().maxCoeff();
      if (trial_res < res) break;
    }
    if (!(trial_res < res)) break;
    Z = trial;
    Z = 0.5 * (Z - Z.reverse().eval());
    F = equilibrium_residual(Z);
    res = F.cwiseAbs().maxCoeff();
  }
  if (!(res <= tol)) {
    std::ostringstream msg;
    msg << "equilibrium Newton stalled for N = " << N << " with residual " << res;
    throw convergence_error("crystal", msg.str());
  }
  return Z;
}

inline Eigen::MatrixXd hessian(const Eigen::VectorXd& Z) {
  const auto N = Z.size();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i == j) continue;
      double d = std::abs(Z[i] - Z[j]);
      if (d == 0) throw domain_error("crystal", "duplicate ion positions");
      double c = 1.0 / (d * d * d);
      K(i, j) = -c;
      K(i, i) += c;
    }
  return K;
}

struct PhononModes {
  Eigen::VectorXd gamma2;  // eigenvalues of K, ascending
  Eigen::MatrixXd vectors;  // columns Gamma_p
  Eigen::VectorXd axial2;   // gamma_{p;z}^2 = 2 gamma_p^2 + 1
  Eigen::VectorXd radial2;  // gamma_{p;x}^2 = gamma_{p;y}^2 = gamma^2 - gamma_p^2
  bool radial_unstable = false;
};

inline PhononModes phonon_modes(const Eigen::MatrixXd& K, double gamma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  PhononModes m;
  m.gamma2 = es.eigenvalues();
  m.vectors = es.eigenvectors();
  for (Eigen::Index p = 0; p < m.vectors.cols(); ++p) {
    Eigen::Index lead = 0;
    while (lead < m.vectors.rows() && std::abs(m.vectors(lead, p)) < 1e-9) ++lead;
    if (lead < m.vectors.rows() && m.vectors(lead, p) < 0) m.vectors.col(p) *= -1;
  }
  m.axial2 = (2 * m.gamma2.array() + 1).matrix();
  m.radial2 = (gamma * gamma - m.gamma2.array()).matrix();
  m.radial_unstable = (m.radial2.array() < 0).any();
  return m;
}

struct CrystalSolution {
  Eigen::VectorXd Z;
  Eigen::MatrixXd K;
  PhononModes modes;
  double L = 0;      // m
  double l_osc = 0;  // m
  bool linear_chain_valid = true;
};

inline double characteristic_length(const TrapParams& t) {
  return std::cbrt(si::coulomb_k * si::e * si::e / (t.M * t.omega * t.omega));
}

inline CrystalSolution solve_crystal(const TrapParams& trap) {
  trap.validate();
  CrystalSolution s;
  s.Z = equilibrium_positions(trap.N);
  s.K = hessian(s.Z);
  s.modes = phonon_modes(s.K, trap.gamma);
  s.L = characteristic_length(trap);
  s.l_osc = std::sqrt(si::hbar / (2 * trap.M * trap.omega));
  s.linear_chain_valid = trap.N < 2 || trap.gamma > critical_anisotropy(trap.N);
  return s;
}

struct GapStats {
  double min, mean, max;
};

inline GapStats gap_stats(const Eigen::VectorXd& Z) {
  GapStats g{1e300, 0, 0};
  for (Eigen::Index i = 0; i + 1 < Z.size(); ++i) {
    double d = Z[i + 1] - Z[i];
    g.min = std::min(g.min, d);
    g.max = std::max(g.max, d);
    g.mean += d;
  }
  g.mean /= static_cast<double>(Z.size() - 1);
  return g;
}

struct PowerLawFit {
  double a, b, c;
  double rms;
};

// y ~ a / N^b + c: linear least squares in (a, c) nested inside a Brent search over b
inline PowerLawFit fit_power_law(const std::vector<double>& Ns, const std::vector<double>& ys) {
  auto solve_ac = [&](double b, double& a, double& c) {
    Eigen::MatrixXd A(Ns.size(), 2);
    Eigen::VectorXd y(Ns.size());
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      A(i, 0) = std::pow(Ns[i], -b);
      A(i, 1) = 1;
      y[i] = ys[i];
    }
    Eigen::Vector2d x = A.colPivHouseholderQr().solve(y);
    a = x[0];
    c = x[1];
    return (A * x - y).squaredNorm();
  };
  auto cost = [&](double b) {
    double a, c;
    return solve_ac(b, a, c);
  };
  auto best = boost::math::tools::brent_find_minima(cost, 0.01, 3.0, 40);
  PowerLawFit f{};
  f.b = best.first;
  solve_ac(f.b, f.a, f.c);
  f.rms = std::sqrt(best.second / static_cast<double>(Ns.size()));
  return f;
}

struct DistanceFits {
  PowerLawFit min, mean, max;
};

inline DistanceFits distance_scaling_fit(int N_lo = 4, int N_hi = 120) {
  if (N_lo < 2 || N_lo + 2 > N_hi) throw domain_error("crystal", "need 2 <= N_lo and at least three chain sizes");
  std::vector<double> Ns, mn, me, mx;
  for (int N = N_lo; N <= N_hi; ++N) {
    auto g = gap_stats(equilibrium_positions(N, 1e-10));
    Ns.push_back(N);
    mn.push_back(g.min);
    me.push_back(g.mean);
    mx.push_back(g.max);
  }
  return {fit_power_law(Ns, mn), fit_power_law(Ns, me), fit_power_law(Ns, mx)};
}

// Dipole-dipole strength V_ij = -(2/9) M omega^2 |<a|r|b>|^2 K_ij, in rad/s.
inline double interaction_strength(double radial_si, const TrapParams& trap, int i, int j) {
  trap.validate();
  if (i < 0 || j < 0 || i >= trap.N || j >= trap.N) throw domain_error("crystal", "ion index out of range");
  auto K = hessian(equilibrium_positions(trap.N));
  double E = -(2.0 / 9.0) * trap.M * trap.omega * trap.omega * radial_si * radial_si * K(i, j);
  return E / si::hbar;
}

inline double interaction_strength(const atomic::ElectronicState& a, const atomic::ElectronicState& b,
                                   const TrapParams& trap, int i, int j, const atomic::IonSpecies& species) {
  double r = atomic::radial_matrix_element(a, b, 1, species).si;
  return interaction_strength(r, trap, i, j);
}

// axial frequency that puts the two-ion spacing at d (m)
inline double omega_for_spacing(double d, double M) {
  double L = d / std::cbrt(2.0);
  return std::sqrt(si::coulomb_k * si::e * si::e / (M * L * L * L));
}

}  // namespace rydgate::crystal
