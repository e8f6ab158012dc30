#pragma once

#include <cmath>

#include "rydgate/atomic/species.hpp"
#include "rydgate/error.hpp"
#include "rydgate/units.hpp"

namespace rydgate::atomic {

// Z_n(r) for channel l
inline double effective_charge(double r, int l, const IonSpecies& sp) {
  if (!sp.screening) return sp.Zc;
  const Channel& c = sp.channel(l);
  return sp.Zc + (sp.Z - sp.Zc) * std::exp(-c.k1 * r) + c.k2 * r * std::exp(-c.k3 * r);
}

inline double coulomb_potential(double r, int l, const IonSpecies& sp) { return -effective_charge(r, l, sp) / r; }

inline double polarization_potential(double r, int l, const IonSpecies& sp) {
  if (!sp.screening || sp.alpha_d == 0) return 0.0;
  double rc = sp.channel(l).r_c;
  double r2 = r * r;
  return -sp.alpha_d / (2 * r2 * r2) * (1 - std::exp(-std::pow(r / rc, 6)));
}

// V_C + V_P in hartree; r in bohr
inline double model_potential(double r, int l, const IonSpecies& sp) {
  if (!(r > 0)) throw domain_error("atomic", "model_potential needs r > 0");
  return coulomb_potential(r, l, sp) + polarization_potential(r, l, sp);
}

inline double model_potential_derivative(double r, int l, const IonSpecies& sp) {
  if (!sp.screening) return sp.Zc / (r * r);
  const Channel& c = sp.channel(l);
  double e1 = std::exp(-c.k1 * r), e3 = std::exp(-c.k3 * r);
  double Zn = sp.Zc + (sp.Z - sp.Zc) * e1 + c.k2 * r * e3;
  double dZn = -(sp.Z - sp.Zc) * c.k1 * e1 + c.k2 * e3 * (1 - c.k3 * r);
  double dVc = Zn / (r * r) - dZn / r;
  double x6 = std::pow(r / c.r_c, 6);
  double ex = std::exp(-x6);
  double r4 = r * r * r * r;
  double dVp = 2 * sp.alpha_d / (r4 * r) * (1 - ex) - sp.alpha_d / (2 * r4) * (6 * x6 / r) * ex;
  return dVc + dVp;
}

inline double spin_orbit_factor(int l, int j2) {
  double j = 0.5 * j2;
  return 0.5 * (j * (j + 1) - l * (l + 1) - 0.75);
}

// V_R with the (1 - alpha^2 V / 2)^2 regularization
inline double spin_orbit_potential(double r, int l, int j2, const IonSpecies& sp) {
  if (!sp.spin_orbit || l == 0) return 0.0;
  const double a2 = fine_structure * fine_structure;
  double V = model_potential(r, l, sp);
  double Nr = 1 - 0.5 * a2 * V;
  Nr *= Nr;
  return 0.5 * a2 / (r * Nr) * model_potential_derivative(r, l, sp) * spin_orbit_factor(l, j2);
}

}  // namespace rydgate::atomic
