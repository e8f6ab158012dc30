#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "rydgate/error.hpp"
#include "rydgate/units.hpp"

namespace rydgate {

using cplx = std::complex<double>;
using Matrix16 = Eigen::Matrix<cplx, 16, 16>;
using Vector16 = Eigen::Matrix<cplx, 16, 1>;

// Single-ion levels in storage order; the two-ion index of |a b> is 4a + b (a = ion 1).
enum Level : int { g0 = 0, g1 = 1, rm = 2, rp = 3 };

struct StateBasis {
  static constexpr int dim = 16;
  static constexpr std::array<const char*, 4> labels = {"0", "1", "-", "+"};

  static constexpr int index(int a, int b) { return 4 * a + b; }
  static constexpr int ion1(int idx) { return idx / 4; }
  static constexpr int ion2(int idx) { return idx % 4; }
  static std::string label(int idx) { return std::string(labels[ion1(idx)]) + labels[ion2(idx)]; }
  static int from_label(const std::string& s) {
    if (s.size() != 2) throw domain_error("model", "two-ion label must have two characters");
    auto pos = [](char c) {
      for (int k = 0; k < 4; ++k)
        if (labels[k][0] == c) return k;
      throw domain_error("model", std::string("unknown level '") + c + "'");
    };
    return index(pos(s[0]), pos(s[1]));
  }

  static constexpr bool rydberg(int level) { return level == rm || level == rp; }
  static constexpr int rydberg_count(int idx) { return rydberg(ion1(idx)) + rydberg(ion2(idx)); }

  // computational subspace |00>, |01>, |10>, |11>
  static constexpr std::array<int, 4> computational = {4 * g0 + g0, 4 * g0 + g1, 4 * g1 + g0, 4 * g1 + g1};

  // symmetric basis B11 = {|++>, |S_R>, |S_+>, |-->, |S_->, |11>} as columns
  static Eigen::Matrix<cplx, 16, 6> symmetric11() {
    const double s = 1 / std::sqrt(2.0);
    Eigen::Matrix<cplx, 16, 6> P = Eigen::Matrix<cplx, 16, 6>::Zero();
    P(index(rp, rp), 0) = 1;
    P(index(rp, rm), 1) = s;
    P(index(rm, rp), 1) = s;
    P(index(rp, g1), 2) = s;
    P(index(g1, rp), 2) = s;
    P(index(rm, rm), 3) = 1;
    P(index(rm, g1), 4) = s;
    P(index(g1, rm), 4) = s;
    P(index(g1, g1), 5) = 1;
    return P;
  }

  // antisymmetric partners {|A_R>, |A_+>, |A_->}
  static Eigen::Matrix<cplx, 16, 3> antisymmetric11() {
    const double s = 1 / std::sqrt(2.0);
    Eigen::Matrix<cplx, 16, 3> P = Eigen::Matrix<cplx, 16, 3>::Zero();
    P(index(rp, rm), 0) = s;
    P(index(rm, rp), 0) = -s;
    P(index(rp, g1), 1) = s;
    P(index(g1, rp), 1) = -s;
    P(index(rm, g1), 2) = s;
    P(index(g1, rm), 2) = -s;
    return P;
  }

  static Matrix16 swap() {
    Matrix16 S = Matrix16::Zero();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) S(index(b, a), index(a, b)) = 1;
    return S;
  }
};

// V and Omega_MW in 2pi x MHz, tau in us, gamma_R in 1/us
struct GateParams {
  double V = 10;
  double Omega_MW = 100;
  double tau = 1;
  double gamma_R = 0;

  void validate() const {
    if (!(V > 0) || !(Omega_MW > 0) || !(tau > 0) || !(gamma_R >= 0))
      throw domain_error("model", "gate parameters need V, Omega_MW, tau > 0 and gamma_R >= 0");
  }
};

// Laser Rabi frequency and detuning per ion, 2pi x MHz
struct Drive {
  double Omega1 = 0, Delta1 = 0, Omega2 = 0, Delta2 = 0;

  static Drive global(double Omega, double Delta) { return {Omega, Delta, Omega, Delta}; }
};

// Two-ion dressed-state Hamiltonian in rad/us, as a dense matrix or applied in place.
class GateHamiltonian {
 public:
  explicit GateHamiltonian(const GateParams& p) : p_(p) {
    p_.validate();
    halfV_ = 0.5 * mhz_to_rad_us(p.V);
    halfMW_ = 0.5 * mhz_to_rad_us(p.Omega_MW);
    halfG_ = 0.5 * p.gamma_R;
  }

  const GateParams& params() const { return p_; }

  Vector16 diagonal(const Drive& d) const {
    std::array<cplx, 4> e1 = level_energies(d.Delta1), e2 = level_energies(d.Delta2);
    Vector16 out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) out[4 * a + b] = e1[a] + e2[b] + halfV_ * z(a) * z(b);
    return out;
  }

  // out = H psi
  void apply(const Drive& d, const Vector16& psi, Vector16& out) const {
    out = diagonal(d).cwiseProduct(psi);
    out[4 * rp + rp] -= halfV_ * psi[4 * rm + rm];
    out[4 * rm + rm] -= halfV_ * psi[4 * rp + rp];
    out[4 * rp + rm] += halfV_ * psi[4 * rm + rp];
    out[4 * rm + rp] += halfV_ * psi[4 * rp + rm];
    const double c1 = mhz_to_rad_us(d.Omega1) / (2 * std::sqrt(2.0));
    const double c2 = mhz_to_rad_us(d.Omega2) / (2 * std::sqrt(2.0));
    for (int b = 0; b < 4; ++b) {
      out[4 * g1 + b] += c1 * (psi[4 * rm + b] + psi[4 * rp + b]);
      out[4 * rm + b] += c1 * psi[4 * g1 + b];
      out[4 * rp + b] += c1 * psi[4 * g1 + b];
    }
    for (int a = 0; a < 4; ++a) {
      out[4 * a + g1] += c2 * (psi[4 * a + rm] + psi[4 * a + rp]);
      out[4 * a + rm] += c2 * psi[4 * a + g1];
      out[4 * a + rp] += c2 * psi[4 * a + g1];
    }
  }

  Matrix16 dense(const Drive& d) const {
    Matrix16 H;
    Vector16 e, col;
    for (int k = 0; k < 16; ++k) {
      e.setZero();
      e[k] = 1;
      apply(d, e, col);
      H.col(k) = col;
    }
    return H;
  }

 private:
  static double z(int level) { return level == rp ? 1.0 : (level == rm ? -1.0 : 0.0); }

  std::array<cplx, 4> level_energies(double Delta_mhz) const {
    double D = mhz_to_rad_us(Delta_mhz);
    return {0.0, 0.0, cplx(D - halfMW_, -halfG_), cplx(D + halfMW_, -halfG_)};
  }

  GateParams p_;
  double halfV_ = 0, halfMW_ = 0, halfG_ = 0;
};

inline Matrix16 two_ion_hamiltonian(const GateParams& p, const Drive& d) { return GateHamiltonian(p).dense(d); }

inline Matrix16 two_ion_hamiltonian(const GateParams& p, double Omega_L, double Delta_L) {
  return two_ion_hamiltonian(p, Drive::global(Omega_L, Delta_L));
}

// Subtracts i gamma_R / 2 per Rydberg excitation on the diagonal.
inline Matrix16 add_decay(Matrix16 H, double gamma_R) {
  for (int k = 0; k < 16; ++k) H(k, k) -= cplx(0, 0.5 * gamma_R * StateBasis::rydberg_count(k));
  return H;
}

// Dimensionless blocks, all in units of Delta_L.

inline Eigen::Matrix<double, 6, 6> h11_symmetric_block(double eps_p, double eps_m, double delta, double eta) {
  const double r = delta / std::sqrt(2.0);
  Eigen::Matrix<double, 6, 6> H;
  // clang-format off
  H << 4 * eps_p + eta, 0, delta, -eta, 0, 0,
       0, 2 * (eps_p + eps_m), r, 0, r, 0,
       delta, r, 2 * eps_p, 0, 0, delta,
       -eta, 0, 0, 4 * eps_m + eta, delta, 0,
       0, r, 0, delta, 2 * eps_m, delta,
       0, 0, delta, 0, delta, 0;
  // clang-format on
  return 0.5 * H;
}

// basis {|-->, |S_->, |11>}
inline Eigen::Matrix3d reduce_h11(double eps_p, double eps_m, double delta, double eta) {
  Eigen::Matrix3d H;
  // clang-format off
  H << 4 * eps_m + eta - eta * eta / (4 * eps_p + eta), delta, 0,
       delta, 2 * eps_m - delta * delta / (4 * (eps_p + eps_m)), delta,
       0, delta, -delta * delta / (2 * eps_p);
  // clang-format on
  return 0.5 * H;
}

// basis {|-0>, |10>}
inline Eigen::Matrix2d reduce_h10(double eps_p, double eps_m, double delta) {
  const double c = delta / (2 * std::sqrt(2.0));
  Eigen::Matrix2d H;
  H << eps_m, c, c, -delta * delta / (8 * eps_p);
  return H;
}

struct Dimensionless {
  double eps_p, eps_m, delta, eta;
};

// all frequencies in the same units; Delta_L must be nonzero
inline Dimensionless dimensionless(double V, double Omega_MW, double Omega_L, double Delta_L) {
  if (Delta_L == 0) throw domain_error("model", "dimensionless form needs Delta_L != 0");
  return {(Delta_L + 0.5 * Omega_MW) / Delta_L, (Delta_L - 0.5 * Omega_MW) / Delta_L, Omega_L / Delta_L,
          V / Delta_L};
}

}  // namespace rydgate
