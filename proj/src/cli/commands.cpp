#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "rydgate/atomic/angular.hpp"
#include "rydgate/atomic/radial.hpp"
#include "rydgate/atomic/species.hpp"
#include "rydgate/atomic/state.hpp"
#include "rydgate/crystal.hpp"
#include "rydgate/dynamics.hpp"
#include "rydgate/gatemetrics.hpp"
#include "rydgate/io/csv.hpp"
#include "rydgate/optimize/protocols.hpp"
#include "rydgate/units.hpp"

namespace rydgate::cli {

using nlohmann::json;
namespace opt = rydgate::optimize;

namespace {

constexpr double default_gamma_R = 1 / 7.8;

int doubled_mj(double mj) {
  double v = 2 * mj;
  long r = std::lround(v);
  if (std::abs(v - static_cast<double>(r)) > 1e-9) throw config_error("cli", "m_j must be a half-integer");
  return static_cast<int>(r);
}

std::string pct(double f, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << 100 * f << " %";
  return s.str();
}

json outcome_json(const GateOutcome& o) {
  return {{"c", o.c},
          {"phi", o.phi},
          {"fidelity_plain", o.fidelity_plain},
          {"fidelity_sqr", o.fidelity_sqr},
          {"population_error", o.population_error},
          {"phase_error", o.phase_error},
          {"entangling_phase", o.entangling_phase}};
}

json result_json(const opt::OptResult& r) {
  return {{"protocol", protocol_name(r.protocol)},
          {"regime", opt::regime_name(r.regime)},
          {"objective", opt::objective_name(r.kind)},
          {"tau", r.params.tau},
          {"gamma_R", r.params.gamma_R},
          {"x", r.x},
          {"fidelity", r.fidelity},
          {"seed", r.seed},
          {"generations", r.generations},
          {"evaluations", r.evaluations},
          {"outcome", outcome_json(r.outcome)}};
}

std::vector<opt::Regime> regimes(const io::RunConfig& cfg) {
  if (cfg.gate.regime) return {*cfg.gate.regime};
  return {opt::Regime::conservative, opt::Regime::optimistic};
}

opt::RegimeSpec spec_of(const io::RunConfig& cfg) {
  auto s = opt::regime_spec(cfg.regime());
  s.params = cfg.params();
  return s;
}

Trajectory run_trajectory(const io::RunConfig& cfg, Protocol p, const std::vector<double>& x, GateParams params) {
  EvolveOptions eo;
  eo.tol = cfg.tol;
  eo.samples = cfg.samples;
  return simulate(GateModel(params, opt::make_pulse(p, x, params)), eo);
}

void print_outcome(std::ostream& os, const GateOutcome& o) {
  os << "  F = " << pct(o.fidelity_sqr) << " (with single-qubit rotations), " << pct(o.fidelity_plain)
     << " without\n"
     << "  population error " << o.population_error << ", phase error " << o.phase_error << ", phi* = "
     << o.entangling_phase << "\n";
}

std::string vec_str(const std::vector<double>& x) {
  std::ostringstream s;
  s << std::setprecision(6) << "(";
  for (std::size_t i = 0; i < x.size(); ++i) s << (i ? ", " : "") << x[i];
  s << ")";
  return s.str();
}

}  // namespace

json solve_radial_cmd(Context& c) {
  const auto& a = c.cfg.atomic;
  auto sp = atomic::species(a.species);
  auto st = atomic::ElectronicState::parse(a.state, doubled_mj(a.mj));
  atomic::GridConfig g;
  g.points = static_cast<std::size_t>(a.points);
  auto wf = atomic::solve_radial(st, sp, g);
  auto file = c.path("radial.csv");
  auto out = io::open_output(file);
  wf.write_csv(out);
  c.text << sp.name << " " << st.label() << ": E = " << std::setprecision(10) << wf.energy << " hartree ("
         << hartree_to_invcm(wf.energy) << " 1/cm), " << wf.interior_nodes() << " nodes\n";
  return {{"species", sp.name},
          {"state", st.label()},
          {"energy_hartree", wf.energy},
          {"energy_invcm", hartree_to_invcm(wf.energy)},
          {"interior_nodes", wf.interior_nodes()},
          {"points", wf.size()},
          {"files", {file.string()}}};
}

json matrix_element_cmd(Context& c) {
  const auto& a = c.cfg.atomic;
  auto sp = atomic::species(a.species);
  auto ket = atomic::ElectronicState::parse(a.state, doubled_mj(a.mj));
  auto bra = atomic::ElectronicState::parse(a.bra, doubled_mj(a.bra_mj));
  atomic::GridConfig g;
  g.points = static_cast<std::size_t>(a.points);
  auto rad = atomic::radial_matrix_element(bra, ket, a.k, sp, g);
  double ang = atomic::angular_matrix_element({bra.l, bra.j2, bra.mj2}, a.k, a.q, {ket.l, ket.j2, ket.mj2});
  c.text << "<" << bra.label() << ", mj=" << bra.mj() << "| r^" << a.k << " Y_" << a.k << "^" << a.q << " |"
         << ket.label() << ", mj=" << ket.mj() << ">\n"
         << "  radial  " << std::setprecision(8) << rad.atomic << " a0^" << a.k << " (" << rad.si << " m^" << a.k
         << ")\n"
         << "  angular " << ang << "\n";
  return {{"species", sp.name},
          {"bra", {{"state", bra.label()}, {"mj", bra.mj()}}},
          {"ket", {{"state", ket.label()}, {"mj", ket.mj()}}},
          {"k", a.k},
          {"q", a.q},
          {"radial_atomic", rad.atomic},
          {"radial_si", rad.si},
          {"angular", ang},
          {"product_atomic", rad.atomic * ang}};
}

json crystal_cmd(Context& c) {
  const auto& k = c.cfg.crystal;
  crystal::TrapParams trap{mhz_to_rad_s(k.omega_axial), k.gamma, k.N, k.mass_u * si::amu};
  auto s = crystal::solve_crystal(trap);
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  json modes = json::array();
  for (Eigen::Index p = 0; p < s.modes.gamma2.size(); ++p)
    modes.push_back({{"gamma2", s.modes.gamma2[p]},
                     {"axial2", s.modes.axial2[p]},
                     {"radial2", s.modes.radial2[p]},
                     {"vector", vec(s.modes.vectors.col(p))}});
  std::vector<double> positions_m;
  for (Eigen::Index i = 0; i < s.Z.size(); ++i) positions_m.push_back(s.Z[i] * s.L);
  c.text << "N = " << k.N << ", L = " << s.L << " m, linear chain " << (s.linear_chain_valid ? "stable" : "unstable")
         << "\n  Z = " << vec_str(vec(s.Z)) << "\n  gamma_p^2 = " << vec_str(vec(s.modes.gamma2)) << "\n";
  return {{"N", k.N},
          {"omega_axial_mhz", k.omega_axial},
          {"gamma", k.gamma},
          {"mass_u", k.mass_u},
          {"L_m", s.L},
          {"l_osc_m", s.l_osc},
          {"Z", vec(s.Z)},
          {"positions_m", positions_m},
          {"hessian", [&] {
             json rows = json::array();
             for (Eigen::Index i = 0; i < s.K.rows(); ++i) rows.push_back(vec(s.K.row(i).transpose()));
             return rows;
           }()},
          {"modes", modes},
          {"critical_anisotropy", k.N >= 2 ? crystal::critical_anisotropy(k.N) : 0.0},
          {"linear_chain_valid", s.linear_chain_valid},
          {"radial_unstable", s.modes.radial_unstable}};
}

json pulse_dump_cmd(Context& c) {
  auto params = c.cfg.params();
  auto x = c.cfg.pulse_parameters();
  auto shape = opt::make_pulse(c.cfg.protocol(), x, params);
  auto file = c.path("pulse.csv");
  io::CsvWriter w(file, "rydgate pulse v1", {"t_us", "Omega_L1", "Delta_L1", "Omega_L2", "Delta_L2"});
  for (double t : sample_grid(params.tau, c.cfg.samples)) {
    auto d = drive(shape, t);
    w.row({t, d.Omega1, d.Delta1, d.Omega2, d.Delta2});
  }
  c.text << "protocol " << protocol_name(c.cfg.protocol()) << ", tau = " << params.tau << " us, Omega0 = "
         << shape.Omega0() << " 2pi MHz, " << c.cfg.samples << " samples -> " << file.string() << "\n";
  return {{"protocol", protocol_name(c.cfg.protocol())},
          {"x", x},
          {"Omega0", shape.Omega0()},
          {"tau", params.tau},
          {"files", {file.string()}}};
}

json simulate_cmd(Context& c) {
  auto params = c.cfg.params();
  auto p = c.cfg.protocol();
  auto x = c.cfg.pulse_parameters();
  auto tr = run_trajectory(c.cfg, p, x, params);
  auto outcome = gate_outcome(tr);
  auto file = c.path("trajectory.csv");
  io::write_trajectory(file, tr);
  json r = {{"protocol", protocol_name(p)},
            {"x", x},
            {"params", {{"V", params.V}, {"Omega_MW", params.Omega_MW}, {"tau", params.tau}, {"gamma_R", params.gamma_R}}},
            {"outcome", outcome_json(outcome)},
            {"final_norm", tr.norm.back()},
            {"files", {file.string()}}};
  c.text << "protocol " << protocol_name(p) << " " << vec_str(x) << ", tau = " << params.tau << " us\n";
  print_outcome(c.text, outcome);
  if (params.gamma_R > 0) {
    GateParams clean = params;
    clean.gamma_R = 0;
    double est = decay_fidelity_estimate(run_trajectory(c.cfg, p, x, clean), params.gamma_R);
    r["decay_estimate"] = est;
    c.text << "  decay estimate " << pct(est) << "\n";
  }
  return r;
}

json optimize_cmd(Context& c) {
  auto spec = spec_of(c.cfg);
  auto p = c.cfg.protocol();
  opt::OptimizeOptions o;
  o.de = c.cfg.optimizer.de;
  o.tol = c.cfg.tol;
  o.warm_start = c.cfg.optimizer.warm_start;
  auto log_file = c.path("optimize.ndjson");
  io::NdjsonLog log(log_file);
  json runs = json::array();
  opt::OptResult best;
  bool first = true;
  for (auto seed : c.cfg.optimizer.seeds) {
    o.de.seed = seed;
    auto r = opt::optimize_protocol(p, spec, c.cfg.optimizer.objective, o);
    auto rj = result_json(r);
    runs.push_back(rj);
    json entry = rj;
    entry["config"] = io::config_to_json(c.cfg);
    entry["history"] = r.history;
    entry["seconds"] = r.seconds;
    log.write(entry);
    c.text << "seed " << seed << ": F = " << pct(r.fidelity, 5) << " at " << vec_str(r.x) << " after "
           << r.generations << " generations\n";
    if (first || r.fidelity > best.fidelity) best = r;
    first = false;
    if (p == Protocol::C) break;
  }
  c.text << "best: protocol " << protocol_name(p) << " " << opt::regime_name(best.regime) << " ("
         << opt::objective_name(best.kind) << ") F = " << pct(best.fidelity, 5) << "\n";
  return {{"best", result_json(best)}, {"runs", runs}, {"files", {log_file.string()}}};
}

namespace {

json sweep_regime(Context& c, opt::Regime regime, opt::RegimeSpec base, std::vector<double> taus, double gamma_R,
                  std::optional<std::vector<double>> warm, io::CsvWriter& csv, io::NdjsonLog& log) {
  auto p = c.cfg.protocol();
  opt::OptimizeOptions o;
  o.de = c.cfg.optimizer.de;
  o.tol = c.cfg.tol;
  o.warm_start = std::move(warm);
  json points = json::array();
  auto on_point = [&](const opt::SweepPoint& pt) {
    auto x = pt.result.x;
    x.resize(3, std::nan(""));
    csv.cells({opt::regime_name(regime), pt.tau, pt.exact, pt.estimate, pt.decay_free, x[0], x[1], x[2]});
    json j = {{"tau", pt.tau},
              {"exact", pt.exact},
              {"estimate", pt.estimate},
              {"decay_free", pt.decay_free},
              {"result", result_json(pt.result)}};
    points.push_back(j);
    j["config"] = io::config_to_json(c.cfg);
    j["seconds"] = pt.result.seconds;
    log.write(j);
    c.text << "  " << opt::regime_name(regime) << " tau = " << pt.tau << " us: F = " << pct(pt.exact)
           << ", estimate " << pct(pt.estimate) << ", without decay " << pct(pt.decay_free) << "\n";
  };
  opt::decay_sweep(p, base, taus, gamma_R, c.cfg.optimizer.seeds, o, on_point);
  return points;
}

std::vector<std::string> sweep_columns() {
  return {"regime", "tau_us", "F_exact", "F_estimate", "F_no_decay", "Omega0", "delta0", "Delta0"};
}

}  // namespace

json sweep_decay_cmd(Context& c) {
  auto regime = c.cfg.regime();
  auto base = spec_of(c.cfg);
  auto taus = c.cfg.taus.empty() ? opt::default_sweep_taus(regime) : c.cfg.taus;
  auto csv_file = c.path("sweep.csv");
  auto log_file = c.path("sweep.ndjson");
  io::CsvWriter csv(csv_file, "rydgate decay sweep v1", sweep_columns());
  io::NdjsonLog log(log_file);
  c.text << "decay sweep, protocol " << protocol_name(c.cfg.protocol()) << ", gamma_R = " << c.cfg.gamma_R
         << " 1/us\n";
  auto points = sweep_regime(c, regime, base, taus, c.cfg.gamma_R, c.cfg.optimizer.warm_start, csv, log);
  return {{"gamma_R", c.cfg.gamma_R}, {"points", points}, {"files", {csv_file.string(), log_file.string()}}};
}

json reproduce_table1(Context& c) {
  std::vector<Protocol> protocols{Protocol::A, Protocol::B, Protocol::C};
  if (c.cfg.pulse.protocol) protocols = {*c.cfg.pulse.protocol};
  auto file = c.path("table1.csv");
  io::CsvWriter csv(file, "rydgate table1 v1",
                    {"regime", "protocol", "Omega0", "delta0", "Delta0", "F_sqr", "F_plain", "population_error",
                     "phase_error", "phi_star"});
  json rows = json::array();
  for (auto regime : regimes(c.cfg)) {
    auto params = opt::regime_spec(regime).params;
    params.gamma_R = c.cfg.gamma_R;
    for (auto p : protocols) {
      auto x = opt::reference_optimum(p, regime);
      auto shape = opt::make_pulse(p, x, params);
      auto o = opt::evaluate(p, x, params, c.cfg.tol);
      std::vector<double> xs = x;
      if (p == Protocol::C) xs = {shape.Omega0(), shape.Omega_MW() / 2};
      xs.resize(3, std::nan(""));
      csv.cells({opt::regime_name(regime), protocol_name(p), xs[0], xs[1], xs[2], o.fidelity_sqr, o.fidelity_plain,
                 o.population_error, o.phase_error, o.entangling_phase});
      rows.push_back({{"regime", opt::regime_name(regime)},
                      {"protocol", protocol_name(p)},
                      {"Omega0", shape.Omega0()},
                      {"x", x},
                      {"outcome", outcome_json(o)}});
      c.text << "Protocol " << protocol_name(p) << " " << opt::regime_name(regime) << ": F = "
             << pct(o.fidelity_sqr, 2) << " (" << pct(o.fidelity_sqr, 5) << "), p* = " << o.population_error
             << ", phi* error = " << o.phase_error << "\n";
    }
  }
  return {{"rows", rows}, {"files", {file.string()}}};
}

json reproduce_fig_gate(Context& c, Protocol p) {
  auto regime = c.cfg.regime();
  auto params = opt::regime_spec(regime).params;
  params.gamma_R = c.cfg.gamma_R;
  auto x = c.cfg.pulse.x ? *c.cfg.pulse.x : opt::reference_optimum(p, regime);
  auto tr = run_trajectory(c.cfg, p, x, params);
  auto o = gate_outcome(tr);
  auto file = c.path("trajectory.csv");
  io::write_trajectory(file, tr);
  c.text << "protocol " << protocol_name(p) << " " << opt::regime_name(regime) << " " << vec_str(x) << "\n";
  print_outcome(c.text, o);
  json r = {{"protocol", protocol_name(p)}, {"x", x}, {"outcome", outcome_json(o)}, {"files", {file.string()}}};
  if (p == Protocol::B) {
    auto xs = opt::reference_strict_optimum(regime);
    auto ts = run_trajectory(c.cfg, p, xs, params);
    auto os = gate_outcome(ts);
    auto sfile = c.path("strict_trajectory.csv");
    io::write_trajectory(sfile, ts);
    c.text << "strict CZ parameters " << vec_str(xs) << ": F = " << pct(os.fidelity_plain) << "\n";
    r["strict"] = {{"x", xs}, {"outcome", outcome_json(os)}};
    r["files"].push_back(sfile.string());
  }
  return r;
}

json reproduce_fig_adiabatic(Context& c) {
  auto regime = c.cfg.regime();
  auto params = opt::regime_spec(regime).params;
  auto x = c.cfg.pulse.x ? *c.cfg.pulse.x : opt::reference_optimum(Protocol::B, regime);
  GateModel m(params, opt::make_pulse(Protocol::B, x, params));
  EvolveOptions eo;
  eo.tol = c.cfg.tol;
  eo.samples = c.cfg.samples;
  auto full = simulate(m, eo);
  auto red = evolve_reduced(m, eo);
  auto est = adiabatic_phase_estimate(hamiltonian_source(m), params.tau);
  const int mm = StateBasis::index(rm, rm), g11 = StateBasis::index(g1, g1), m0 = StateBasis::index(rm, g0),
            g10 = StateBasis::index(g1, g0), s1 = StateBasis::index(g1, rm), s2 = StateBasis::index(rm, g1);
  auto file = c.path("adiabatic.csv");
  io::CsvWriter csv(file, "rydgate adiabatic v1",
                    {"t_us", "full_mm", "full_Sm", "full_11", "reduced_mm", "reduced_Sm", "reduced_11", "full_m0",
                     "full_10", "reduced_m0", "reduced_10"});
  double dev = 0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto& psi = full.states[i];
    double sm = 0.5 * std::norm(psi[s1] + psi[s2]);
    std::vector<double> f{std::norm(psi[mm]), sm, std::norm(psi[g11]), std::norm(psi[m0]), std::norm(psi[g10])};
    std::vector<double> r{red.p11[i][0], red.p11[i][1], red.p11[i][2], red.p10[i][0], red.p10[i][1]};
    for (int k = 0; k < 5; ++k) dev = std::max(dev, std::abs(f[k] - r[k]));
    csv.row({full.times[i], f[0], f[1], f[2], r[0], r[1], r[2], f[3], f[4], r[3], r[4]});
  }
  double phi = gate_outcome(full).entangling_phase;
  c.text << "reduced vs full model: max population deviation " << dev << "\n"
         << "entangling phase: simulated " << phi << ", adiabatic estimate " << est.phase << "\n";
  return {{"x", x},
          {"max_population_deviation", dev},
          {"phi_star", phi},
          {"phi_star_adiabatic", est.phase},
          {"files", {file.string()}}};
}

json reproduce_fig_decay(Context& c) {
  double gamma = c.cfg.gamma_R > 0 ? c.cfg.gamma_R : default_gamma_R;
  auto csv_file = c.path("decay.csv");
  auto log_file = c.path("decay.ndjson");
  io::CsvWriter csv(csv_file, "rydgate decay sweep v1", sweep_columns());
  io::NdjsonLog log(log_file);
  c.text << "decay sweep, protocol B, gamma_R = " << gamma << " 1/us\n";
  json out = json::object();
  for (auto regime : regimes(c.cfg)) {
    auto taus = c.cfg.taus.empty() ? opt::default_sweep_taus(regime) : c.cfg.taus;
    std::optional<std::vector<double>> warm = opt::reference_optimum(Protocol::B, regime);
    if (c.cfg.optimizer.warm_start) warm = c.cfg.optimizer.warm_start;
    auto base = opt::regime_spec(regime);
    auto saved = c.cfg.pulse.protocol;
    c.cfg.pulse.protocol = Protocol::B;
    out[opt::regime_name(regime)] = sweep_regime(c, regime, base, taus, gamma, warm, csv, log);
    c.cfg.pulse.protocol = saved;
  }
  return {{"gamma_R", gamma}, {"points", out}, {"files", {csv_file.string(), log_file.string()}}};
}

json reproduce_fig_distances(Context& c) {
  const int N_max = 120;
  auto file = c.path("distances.csv");
  io::CsvWriter csv(file, "rydgate distances v1", {"N", "min", "mean", "max"});
  for (int N = 2; N <= N_max; ++N) {
    auto g = crystal::gap_stats(crystal::equilibrium_positions(N, 1e-10));
    csv.row({static_cast<double>(N), g.min, g.mean, g.max});
  }
  auto fit_json = [](const crystal::PowerLawFit& f) {
    return json{{"a", f.a}, {"b", f.b}, {"c", f.c}, {"rms", f.rms}};
  };
  json fits = json::object();
  for (int lo : {4, 2}) {
    auto f = crystal::distance_scaling_fit(lo, N_max);
    std::string key = "N" + std::to_string(lo) + "_" + std::to_string(N_max);
    fits[key] = {{"min", fit_json(f.min)}, {"mean", fit_json(f.mean)}, {"max", fit_json(f.max)}};
    c.text << "fit a/N^b + c over N in [" << lo << ", " << N_max << "]\n";
    for (auto [name, p] : {std::pair{"min", f.min}, std::pair{"mean", f.mean}, std::pair{"max", f.max}})
      c.text << "  " << std::left << std::setw(5) << name << std::setprecision(4) << " a = " << p.a
             << ", b = " << p.b << ", c = " << p.c << "\n";
  }
  return {{"fits", fits}, {"files", {file.string()}}};
}

}  // namespace rydgate::cli
