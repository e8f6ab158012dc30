#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydgate/dynamics.hpp"
#include "rydgate/gatemetrics.hpp"
#include "rydgate/optimize/differential_evolution.hpp"
#include "rydgate/pulses.hpp"

namespace rydgate::optimize {

enum class Regime { conservative, optimistic };

inline const char* regime_name(Regime r) { return r == Regime::conservative ? "conservative" : "optimistic"; }

inline Regime parse_regime(const std::string& s) {
  if (s == "conservative" || s == "cons") return Regime::conservative;
  if (s == "optimistic" || s == "opt") return Regime::optimistic;
  throw config_error("optimize", "unknown regime '" + s + "'");
}

struct Interval {
  double lo, hi;
};

// 2pi x MHz
struct Bounds {
  Interval Omega0, delta0, Delta0;
  Regime tag = Regime::conservative;

  void validate() const {
    for (const auto& b : {Omega0, delta0, Delta0})
      if (!(b.lo <= b.hi)) throw domain_error("optimize", "bound with lo > hi");
  }
};

struct RegimeSpec {
  GateParams params;
  Bounds bounds;
};

inline RegimeSpec regime_spec(Regime r) {
  if (r == Regime::conservative) return {{10, 100, 1.0, 0}, {{0, 10}, {0, 100}, {-100, 100}, r}};
  return {{25, 250, 0.3, 0}, {{0, 100}, {0, 250}, {-250, 250}, r}};
}

// best parameters reported for the fixed regimes: (Omega0, delta0[, Delta0])
inline std::vector<double> reference_optimum(Protocol p, Regime r) {
  bool c = r == Regime::conservative;
  switch (p) {
    case Protocol::A: return c ? std::vector<double>{7.78, 47.61} : std::vector<double>{92.04, 114.07};
    case Protocol::B: return c ? std::vector<double>{9.80, 37.44, -12.10} : std::vector<double>{84.37, 39.94, 197.13};
    case Protocol::C: return {};
  }
  return {};
}

// parameters without single-qubit rotations
inline std::vector<double> reference_strict_optimum(Regime r) {
  return r == Regime::conservative ? std::vector<double>{9.71, 37.97, -11.50} : std::vector<double>{72.72, 8.39, -134.37};
}

inline int free_parameters(Protocol p) { return p == Protocol::A ? 2 : p == Protocol::B ? 3 : 0; }

inline PulseShape make_pulse(Protocol p, const std::vector<double>& x, const GateParams& g) {
  if (static_cast<int>(x.size()) != free_parameters(p))
    throw domain_error("optimize", std::string("protocol ") + protocol_name(p) + " takes " +
                                       std::to_string(free_parameters(p)) + " parameters");
  switch (p) {
    case Protocol::A: return PulseShape::protocol_a(x[0], x[1], g.tau);
    case Protocol::B: return PulseShape::protocol_b(x[0], x[1], x[2], g.tau);
    case Protocol::C: return PulseShape::protocol_c(g.tau, g.Omega_MW);
  }
  throw domain_error("optimize", "unknown protocol");
}

enum class ObjectiveKind { sqr, strict };

inline const char* objective_name(ObjectiveKind k) { return k == ObjectiveKind::sqr ? "sqr" : "strict"; }

inline ObjectiveKind parse_objective(const std::string& s) {
  if (s == "sqr") return ObjectiveKind::sqr;
  if (s == "strict") return ObjectiveKind::strict;
  throw config_error("optimize", "unknown objective '" + s + "'");
}

inline double fidelity_of(const GateOutcome& o, ObjectiveKind k) {
  return k == ObjectiveKind::sqr ? o.fidelity_sqr : o.fidelity_plain;
}

inline GateOutcome evaluate(Protocol p, const std::vector<double>& x, const GateParams& g, double tol = 1e-10) {
  return gate_outcome(final_state(GateModel(g, make_pulse(p, x, g)), tol));
}

struct OptResult {
  Protocol protocol = Protocol::B;
  Regime regime = Regime::conservative;
  ObjectiveKind kind = ObjectiveKind::sqr;
  GateParams params;
  std::vector<double> x;  // Omega0, delta0[, Delta0]
  double fidelity = 0;
  GateOutcome outcome;
  std::uint64_t seed = 0;
  int generations = 0;
  long evaluations = 0;
  std::vector<double> history;  // best fidelity per generation
  double seconds = 0;
};

struct OptimizeOptions {
  DEConfig de;
  double tol = 1e-10;
  std::optional<std::vector<double>> warm_start;
};

inline std::pair<std::vector<double>, std::vector<double>> box(Protocol p, const Bounds& b) {
  std::vector<double> lo{b.Omega0.lo, b.delta0.lo, b.Delta0.lo}, hi{b.Omega0.hi, b.delta0.hi, b.Delta0.hi};
  lo.resize(static_cast<std::size_t>(free_parameters(p)));
  hi.resize(static_cast<std::size_t>(free_parameters(p)));
  return {lo, hi};
}

// Maximizes the chosen fidelity over the regime's bounds; protocol C is evaluated directly.
inline OptResult optimize_protocol(Protocol p, const RegimeSpec& spec, ObjectiveKind kind,
                                   const OptimizeOptions& opt = {}) {
  spec.bounds.validate();
  OptResult r;
  r.protocol = p;
  r.regime = spec.bounds.tag;
  r.kind = kind;
  r.params = spec.params;
  r.seed = opt.de.seed;
  if (p == Protocol::C) {
    r.outcome = evaluate(p, {}, spec.params, opt.tol);
    r.fidelity = fidelity_of(r.outcome, kind);
    r.history = {r.fidelity};
    return r;
  }
  auto [lo, hi] = box(p, spec.bounds);
  Objective f = [&](const std::vector<double>& x) {
    return 1 - fidelity_of(evaluate(p, x, spec.params, opt.tol), kind);
  };
  auto de = differential_evolution(f, lo, hi, opt.de, opt.warm_start);
  r.x = de.x;
  r.outcome = evaluate(p, r.x, spec.params, opt.tol);
  r.fidelity = fidelity_of(r.outcome, kind);
  r.generations = de.generations;
  r.evaluations = de.evaluations;
  r.seconds = de.seconds;
  for (double v : de.history) r.history.push_back(1 - v);
  return r;
}

inline OptResult optimize_best_of(Protocol p, const RegimeSpec& spec, ObjectiveKind kind,
                                  const std::vector<std::uint64_t>& seeds, OptimizeOptions opt = {}) {
  if (seeds.empty()) throw domain_error("optimize", "need at least one seed");
  OptResult best;
  bool first = true;
  for (auto s : seeds) {
    opt.de.seed = s;
    auto r = optimize_protocol(p, spec, kind, opt);
    if (first || r.fidelity > best.fidelity) best = r;
    first = false;
    if (p == Protocol::C) break;
  }
  return best;
}

struct SweepPoint {
  double tau = 0;
  OptResult result;     // decayed objective
  double exact = 0;     // non-Hermitian fidelity at the optimum
  double estimate = 0;  // decay-free trajectory plus the integral estimate
  double decay_free = 0;
};

inline std::vector<double> default_sweep_taus(Regime r) {
  if (r == Regime::conservative) return {0.6, 0.8, 1.0, 1.2, 1.5, 2.0};
  return {0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
}

// Re-optimizes at each tau with decay in the objective, warm-starting from the previous point.
inline std::vector<SweepPoint> decay_sweep(Protocol p, const RegimeSpec& base, const std::vector<double>& taus,
                                           double gamma_R, const std::vector<std::uint64_t>& seeds,
                                           OptimizeOptions opt = {},
                                           const std::function<void(const SweepPoint&)>& on_point = {}) {
  if (!(gamma_R >= 0)) throw domain_error("optimize", "decay sweep needs gamma_R >= 0");
  std::vector<SweepPoint> out;
  for (double tau : taus) {
    RegimeSpec spec = base;
    spec.params.tau = tau;
    spec.params.gamma_R = gamma_R;
    SweepPoint pt;
    pt.tau = tau;
    pt.result = optimize_best_of(p, spec, ObjectiveKind::sqr, seeds, opt);
    pt.exact = pt.result.fidelity;
    GateParams clean = spec.params;
    clean.gamma_R = 0;
    GateModel m(clean, make_pulse(p, pt.result.x, clean));
    EvolveOptions eo;
    eo.tol = opt.tol;
    auto tr = simulate(m, eo);
    pt.decay_free = gate_outcome(tr).fidelity_sqr;
    pt.estimate = decay_fidelity_estimate(tr, gamma_R);
    if (p != Protocol::C) opt.warm_start = pt.result.x;
    if (on_point) on_point(pt);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace rydgate::optimize
