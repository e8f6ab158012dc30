#pragma once

#include <numbers>

namespace rydgate {

// CODATA 2018, SI
namespace si {
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double e = 1.602176634e-19;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double a0 = 5.29177210903e-11;
inline constexpr double hartree = 4.3597447222071e-18;
inline constexpr double amu = 1.66053906660e-27;
inline constexpr double coulomb_k = 1.0 / (4.0 * std::numbers::pi * eps0);  // C in C e^2
}  // namespace si

// fine-structure constant; 1/c in atomic units
inline constexpr double fine_structure = 7.2973525693e-3;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// frequencies: user-facing in 2pi x MHz, internal angular in rad/us
constexpr double mhz_to_rad_us(double f) { return two_pi * f; }
constexpr double rad_us_to_mhz(double w) { return w / two_pi; }
constexpr double rad_s_to_mhz(double w) { return w / two_pi * 1e-6; }
constexpr double mhz_to_rad_s(double f) { return two_pi * f * 1e6; }

constexpr double bohr_to_m(double r, int power = 1) {
  double f = 1.0;
  for (int i = 0; i < power; ++i) f *= si::a0;
  return r * f;
}

// energy in hartree -> wavenumber (1/cm)
constexpr double hartree_to_invcm(double E) { return E * 219474.6313632; }

}  // namespace rydgate
