#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "rydgate/atomic/potential.hpp"
#include "rydgate/atomic/state.hpp"
#include "rydgate/error.hpp"

namespace rydgate::atomic {

struct GridConfig {
  double r_min = 1e-4;
  double r_max = 0;  // 0 -> 3 n (n+1) (2 / Zc)
  std::size_t points = 20000;
  double tail_decay = 50;  // inward start once the WKB tail reaches exp(-tail_decay)

  double outer_radius(int n, int Zc) const { return r_max > 0 ? r_max : 3.0 * n * (n + 1) * 2.0 / Zc; }
};

struct RadialWavefunction {
  std::vector<double> r;
  std::vector<double> phi;
  double energy = 0;  // hartree
  int l = 0;
  int j2 = 1;

  std::size_t size() const { return r.size(); }

  int interior_nodes() const {
    int count = 0;
    double prev = 0;
    for (double v : phi) {
      if (v == 0) continue;
      if (prev != 0 && (v > 0) != (prev > 0)) ++count;
      prev = v;
    }
    return count;
  }

  void write_csv(std::ostream& os) const {
    os << "# rydgate radial v1\nr_bohr,phi\n";
    os.precision(12);
    for (std::size_t i = 0; i < r.size(); ++i) os << r[i] << ',' << phi[i] << '\n';
  }
};

// trapezoid on a non-uniform grid
inline double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

namespace detail {

// Numerov on x = ln r with phi = sqrt(r) y:  y'' = g(x) y,  g = 2 r^2 (W - E) + (l + 1/2)^2
class RadialProblem {
 public:
  RadialProblem(const ElectronicState& st, const IonSpecies& sp, const GridConfig& cfg)
      : l_(st.l), tail_(cfg.tail_decay) {
    double rmax = cfg.outer_radius(st.n, sp.Zc);
    if (!(cfg.r_min > 0) || !(rmax > cfg.r_min) || cfg.points < 100)
      throw domain_error("atomic", "invalid radial grid");
    std::size_t N = cfg.points;
    h_ = std::log(rmax / cfg.r_min) / static_cast<double>(N - 1);
    r_.resize(N);
    w_.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
      double r = cfg.r_min * std::exp(h_ * static_cast<double>(i));
      r_[i] = r;
      w_[i] = 2 * r * r * (model_potential(r, st.l, sp) + spin_orbit_potential(r, st.l, st.j2, sp));
    }
    r_.back() = rmax;
    lam_ = (l_ + 0.5) * (l_ + 0.5);
  }

  std::size_t size() const { return r_.size(); }
  const std::vector<double>& r() const { return r_; }

  double g(std::size_t i, double E) const { return w_[i] - 2 * r_[i] * r_[i] * E + lam_; }

  double lowest_potential() const {
    double m = 0;
    for (std::size_t i = 0; i < r_.size(); ++i) m = std::min(m, (w_[i] + lam_ - 0.25) / (2 * r_[i] * r_[i]));
    return m;
  }

  // sign changes of the outward solution up to the end of the decaying tail
  int count_nodes(double E) const {
    const double c = h_ * h_ / 12;
    double y0 = start(0), y1 = start(1);
    double f0 = 1 - c * g(0, E), f1 = 1 - c * g(1, E);
    int nodes = 0;
    std::size_t end = tail_end(turning_point(E), E);
    for (std::size_t i = 2; i <= end; ++i) {
      double f2 = 1 - c * g(i, E);
      double y2 = ((12 - 10 * f1) * y1 - f0 * y0) / f2;
      if ((y2 > 0 && y1 < 0) || (y2 < 0 && y1 > 0)) ++nodes;
      if (std::abs(y2) > 1e200) {
        y2 *= 1e-200;
        y1 *= 1e-200;
      }
      y0 = y1;
      y1 = y2;
      f0 = f1;
      f1 = f2;
    }
    return nodes;
  }

  // last index inside the outer classically allowed region
  std::size_t turning_point(double E) const {
    for (std::size_t i = r_.size() - 1; i > 1; --i)
      if (g(i, E) < 0) return std::min(i, r_.size() - 3);
    return 2;
  }

  // stops where the tail has decayed or Numerov would lose stability
  std::size_t tail_end(std::size_t m, double E) const {
    double s = 0;
    for (std::size_t i = m; i < r_.size(); ++i) {
      double k = g(i, E);
      if (k > 0) s += std::sqrt(k) * h_;
      if (s > tail_ || k * h_ * h_ > 6) return std::max(i, m + 3);
    }
    return r_.size() - 1;
  }

  struct Match {
    std::vector<double> y;
    double mismatch;
  };

  // outward to m, inward from tail end to m, continuous at m
  Match match(double E) const {
    const double c = h_ * h_ / 12;
    std::size_t N = r_.size();
    std::size_t m = turning_point(E);
    std::size_t end = tail_end(m, E);
    std::vector<double> y(N, 0.0), f(N);
    for (std::size_t i = 0; i <= end; ++i) f[i] = 1 - c * g(i, E);

    y[0] = start(0);
    y[1] = start(1);
    for (std::size_t i = 1; i < m + 1; ++i) {
      y[i + 1] = ((12 - 10 * f[i]) * y[i] - f[i - 1] * y[i - 1]) / f[i + 1];
      if (std::abs(y[i + 1]) > 1e200)
        for (std::size_t k = 0; k <= i + 1; ++k) y[k] *= 1e-200;
    }
    double out_m = y[m], out_d = y[m + 1] - y[m - 1];

    std::vector<double> z(end + 1, 0.0);
    z[end] = 0;
    z[end - 1] = 1e-30;
    for (std::size_t i = end - 1; i > m - 1; --i) {
      z[i - 1] = ((12 - 10 * f[i]) * z[i] - f[i + 1] * z[i + 1]) / f[i - 1];
      if (std::abs(z[i - 1]) > 1e200)
        for (std::size_t k = i - 1; k <= end; ++k) z[k] *= 1e-200;
    }
    double in_m = z[m], in_d = z[m + 1] - z[m - 1];
    double scale = out_m / in_m;
    for (std::size_t i = m + 1; i <= end; ++i) y[i] = z[i] * scale;
    return {std::move(y), out_d / out_m - in_d / in_m};
  }

 private:
  double start(std::size_t i) const { return std::pow(r_[i], l_ + 0.5); }

  int l_;
  double tail_;
  double h_ = 0;
  double lam_ = 0;
  std::vector<double> r_;
  std::vector<double> w_;
};

}  // namespace detail

// Bound state of the model potential: bisection on the outward node count, then polished
// by matching the inward and outward logarithmic derivatives at the outer turning point.
inline RadialWavefunction solve_radial(const ElectronicState& target, const IonSpecies& species,
                                       const GridConfig& cfg = {}) {
  target.validate();
  species.validate();
  detail::RadialProblem prob(target, species, cfg);
  const int k = target.n - target.l - 1;

  double lo = prob.lowest_potential(), hi = 0.0;
  int nlo = prob.count_nodes(lo), nhi = prob.count_nodes(hi);
  if (nlo > k || nhi <= k) {
    std::ostringstream msg;
    msg << "no eigenvalue with " << k << " nodes in [" << lo << ", " << hi << "] hartree for " << target.label()
        << " (node counts " << nlo << ", " << nhi << ")";
    throw convergence_error("atomic", msg.str());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-10 * std::abs(hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (prob.count_nodes(mid) > k ? hi : lo) = mid;
  }

  auto mismatch = [&](double E) { return prob.match(E).mismatch; };
  double E = 0.5 * (lo + hi);
  double dlo = mismatch(lo), dhi = mismatch(hi);
  if (std::isfinite(dlo) && std::isfinite(dhi) && (dlo > 0) != (dhi > 0)) {
    boost::uintmax_t iters = 100;
    auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::abs(a); };
    auto br = boost::math::tools::toms748_solve(mismatch, lo, hi, dlo, dhi, tol, iters);
    E = 0.5 * (br.first + br.second);
  }

  auto y = prob.match(E).y;
  RadialWavefunction wf;
  wf.r = prob.r();
  wf.energy = E;
  wf.l = target.l;
  wf.j2 = target.j2;
  wf.phi.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) wf.phi[i] = y[i] * std::sqrt(wf.r[i]);
  wf.phi.back() = 0;

  std::vector<double> sq(wf.phi.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = wf.phi[i] * wf.phi[i];
  double norm = std::sqrt(trapezoid(wf.r, sq));
  for (double& v : wf.phi) v /= norm;

  if (wf.interior_nodes() != k) {
    std::ostringstream msg;
    msg << target.label() << ": solution has " << wf.interior_nodes() << " nodes, expected " << k;
    throw convergence_error("atomic", msg.str());
  }
  return wf;
}

// Integral of r^k phi_a phi_b dr in bohr^k. Identical or prefix-sharing grids integrate
// directly; otherwise both functions are linearly interpolated onto the union grid.
inline double radial_integral(const RadialWavefunction& a, const RadialWavefunction& b, int k) {
  const auto& A = a.size() >= b.size() ? a : b;
  const auto& B = a.size() >= b.size() ? b : a;
  if (A.r.empty() || B.r.empty() || A.r.back() <= B.r.front() || B.r.back() <= A.r.front())
    throw domain_error("atomic", "radial grids do not overlap");

  bool prefix = true;
  for (std::size_t i = 0; i < B.size() && prefix; ++i)
    prefix = std::abs(A.r[i] - B.r[i]) <= 1e-12 * A.r[i];

  std::vector<double> x, f;
  if (prefix) {
    x.assign(A.r.begin(), A.r.begin() + static_cast<std::ptrdiff_t>(B.size()));
    f.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::pow(x[i], k) * A.phi[i] * B.phi[i];
  } else {
    double lo = std::max(A.r.front(), B.r.front()), hi = std::min(A.r.back(), B.r.back());
    for (double v : A.r)
      if (v >= lo && v <= hi) x.push_back(v);
    for (double v : B.r)
      if (v >= lo && v <= hi) x.push_back(v);
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    auto interp = [](const RadialWavefunction& w, double r) {
      auto it = std::lower_bound(w.r.begin(), w.r.end(), r);
      if (it == w.r.begin()) return w.phi.front();
      if (it == w.r.end()) return w.phi.back();
      std::size_t i = static_cast<std::size_t>(it - w.r.begin());
      double t = (r - w.r[i - 1]) / (w.r[i] - w.r[i - 1]);
      return (1 - t) * w.phi[i - 1] + t * w.phi[i];
    };
    f.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::pow(x[i], k) * interp(A, x[i]) * interp(B, x[i]);
  }
  return trapezoid(x, f);
}

struct RadialElement {
  double atomic;  // bohr^k
  double si;      // m^k
};

// Both states are solved on the grid of the larger n so the integral is taken point by point.
inline RadialElement radial_matrix_element(const ElectronicState& a, const ElectronicState& b, int k,
                                           const IonSpecies& species, GridConfig cfg = {}) {
  if (k != 1 && k != 2) throw domain_error("atomic", "radial_matrix_element supports k = 1, 2");
  if (cfg.r_max <= 0) cfg.r_max = cfg.outer_radius(std::max(a.n, b.n), species.Zc);
  auto wa = solve_radial(a, species, cfg);
  auto wb = a.same_level(b) ? wa : solve_radial(b, species, cfg);
  double v = radial_integral(wa, wb, k);
  return {v, bohr_to_m(v, k)};
}

}  // namespace rydgate::atomic
