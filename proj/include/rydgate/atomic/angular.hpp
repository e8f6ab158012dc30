#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "rydgate/error.hpp"

namespace rydgate::atomic {

namespace detail {

inline double factorial(int n) {
  static const auto table = [] {
    std::array<double, 171> t{};
    t[0] = 1;
    for (int i = 1; i < 171; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0 || n > 170) throw domain_error("atomic", "factorial argument out of range");
  return table[n];
}

inline int doubled(double x) {
  double d = 2 * x;
  double r = std::round(d);
  if (std::abs(d - r) > 1e-9) throw domain_error("atomic", "angular momentum must be a half-integer");
  return static_cast<int>(r);
}

}  // namespace detail

// <j1 m1 j2 m2 | j m> with all arguments doubled, Condon-Shortley phase (Racah's formula)
inline double clebsch_gordan2(int j1, int m1, int j2, int m2, int j, int m) {
  if (j1 < 0 || j2 < 0 || j < 0) throw domain_error("atomic", "negative angular momentum");
  if (m1 + m2 != m) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m) > j) return 0.0;
  if ((j1 + m1) % 2 || (j2 + m2) % 2 || (j + m) % 2) return 0.0;
  if (j < std::abs(j1 - j2) || j > j1 + j2 || (j1 + j2 + j) % 2) return 0.0;

  using detail::factorial;
  int a = (j1 + j2 - j) / 2, b = (j1 - j2 + j) / 2, c = (-j1 + j2 + j) / 2;
  double pre = (j + 1) * factorial(a) * factorial(b) * factorial(c) / factorial((j1 + j2 + j) / 2 + 1);
  pre *= factorial((j1 + m1) / 2) * factorial((j1 - m1) / 2) * factorial((j2 + m2) / 2) *
         factorial((j2 - m2) / 2) * factorial((j + m) / 2) * factorial((j - m) / 2);

  int kmin = std::max({0, (j2 - j - m1) / 2, (j1 - j + m2) / 2});
  int kmax = std::min({a, (j1 - m1) / 2, (j2 + m2) / 2});
  double sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    double den = factorial(k) * factorial(a - k) * factorial((j1 - m1) / 2 - k) * factorial((j2 + m2) / 2 - k) *
                 factorial((j - j2 + m1) / 2 + k) * factorial((j - j1 - m2) / 2 + k);
    sum += (k % 2 ? -1.0 : 1.0) / den;
  }
  return std::sqrt(pre) * sum;
}

inline double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m) {
  using detail::doubled;
  return clebsch_gordan2(doubled(j1), doubled(m1), doubled(j2), doubled(m2), doubled(j), doubled(m));
}

// orbital and spin-orbit coupled label for one side of the angular element
struct AngularState {
  int l;
  int j2;
  int mj2;
};

// <l' j' m_j'| Y_k^q |l j m_j> for a single s = 1/2 electron
inline double angular_matrix_element(const AngularState& bra, int k, int q, const AngularState& ket) {
  if (k < 0 || std::abs(q) > k) throw domain_error("atomic", "need |q| <= k");
  for (const auto* s : {&bra, &ket})
    if (s->l < 0 || (s->j2 != 2 * s->l + 1 && s->j2 != 2 * s->l - 1) || std::abs(s->mj2) > s->j2 ||
        (s->mj2 - s->j2) % 2)
      throw domain_error("atomic", "invalid (l, j, m_j)");
  if (bra.mj2 != ket.mj2 + 2 * q) return 0.0;
  if (bra.l < std::abs(ket.l - k) || bra.l > ket.l + k) return 0.0;

  const int l1 = 2 * ket.l, l2 = 2 * bra.l, k2 = 2 * k;
  double pre = std::sqrt((2 * k + 1) / (4 * std::numbers::pi)) *
               std::sqrt((2.0 * ket.l + 1) / (2.0 * bra.l + 1)) * clebsch_gordan2(l1, 0, k2, 0, l2, 0);
  if (pre == 0) return 0.0;
  double sum = 0;
  for (int ms : {-1, 1}) {
    int ml = ket.mj2 - ms, mlp = bra.mj2 - ms;
    if (std::abs(ml) > l1 || std::abs(mlp) > l2) continue;
    sum += clebsch_gordan2(l2, mlp, 1, ms, bra.j2, bra.mj2) * clebsch_gordan2(l1, ml, 1, ms, ket.j2, ket.mj2) *
           clebsch_gordan2(l1, ml, k2, 2 * q, l2, mlp);
  }
  return pre * sum;
}

}  // namespace rydgate::atomic
