#include "rydgate/cli.hpp"

#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rydgate/io/csv.hpp"

namespace rydgate::cli {

namespace {

using Override = std::function<void(io::RunConfig&)>;

enum Groups : unsigned {
  GATE = 1,
  PULSE = 2,
  OPTIMIZER = 4,
  SWEEP = 8,
  ATOMIC = 16,
  CRYSTAL = 32,
  INTEGRATOR = 64,
};

struct Options {
  std::string config_path;
  std::vector<Override> overrides;

  template <class T>
  void add(CLI::App* app, const std::string& name, const std::string& help, std::function<void(io::RunConfig&, T)> f) {
    app->add_option_function<T>(
        name, [this, f](const T& v) { overrides.push_back([f, v](io::RunConfig& c) { f(c, v); }); }, help);
  }

  void attach(CLI::App* app, unsigned groups) {
    app->add_option("-c,--config", config_path, "JSON run configuration or run summary");
    add<std::string>(app, "-o,--out-dir", "output directory", [](auto& c, auto v) { c.out_dir = v; });
    add<std::string>(app, "--prefix", "output file prefix", [](auto& c, auto v) { c.prefix = v; });
    if (groups & GATE) {
      add<std::string>(app, "--regime", "conservative | optimistic",
                       [](auto& c, auto v) { c.gate.regime = optimize::parse_regime(v); });
      add<double>(app, "--V", "interaction strength, 2pi MHz", [](auto& c, auto v) { c.gate.V = v; });
      add<double>(app, "--omega-mw", "microwave Rabi frequency, 2pi MHz",
                  [](auto& c, auto v) { c.gate.Omega_MW = v; });
      add<double>(app, "--tau", "gate time, us", [](auto& c, auto v) { c.gate.tau = v; });
      add<double>(app, "--gamma-r", "Rydberg decay rate, 1/us", [](auto& c, auto v) { c.gamma_R = v; });
    }
    if (groups & PULSE) {
      add<std::string>(app, "--protocol", "A | B | C",
                       [](auto& c, auto v) { c.pulse.protocol = parse_protocol(v); });
      add<std::vector<double>>(app, "--x", "pulse parameters Omega0 delta0 [Delta0], 2pi MHz",
                               [](auto& c, auto v) { c.pulse.x = v; });
    }
    if (groups & INTEGRATOR) {
      add<double>(app, "--tol", "integrator tolerance", [](auto& c, auto v) { c.tol = v; });
      add<int>(app, "--samples", "output samples", [](auto& c, auto v) { c.samples = v; });
    }
    if (groups & OPTIMIZER) {
      add<std::string>(app, "--objective", "sqr | strict",
                       [](auto& c, auto v) { c.optimizer.objective = optimize::parse_objective(v); });
      add<std::vector<std::uint64_t>>(app, "--seeds", "DE seeds, best run kept",
                                      [](auto& c, auto v) { c.optimizer.seeds = v; });
      add<int>(app, "--generations", "max DE generations",
               [](auto& c, auto v) { c.optimizer.de.max_generations = v; });
      add<int>(app, "--popsize", "population per parameter",
               [](auto& c, auto v) { c.optimizer.de.population_factor = v; });
      add<double>(app, "--F", "DE mutation factor", [](auto& c, auto v) { c.optimizer.de.F = v; });
      add<double>(app, "--CR", "DE crossover rate", [](auto& c, auto v) { c.optimizer.de.CR = v; });
      add<double>(app, "--de-tol", "DE relative spread tolerance", [](auto& c, auto v) { c.optimizer.de.tol = v; });
      add<int>(app, "--workers", "evaluation threads", [](auto& c, auto v) { c.optimizer.de.workers = v; });
      add<std::vector<double>>(app, "--warm-start", "initial member of the population",
                               [](auto& c, auto v) { c.optimizer.warm_start = v; });
    }
    if (groups & SWEEP)
      add<std::vector<double>>(app, "--taus", "gate times to sweep, us", [](auto& c, auto v) { c.taus = v; });
    if (groups & ATOMIC) {
      add<std::string>(app, "--species", "Ca+ | Sr+ | Ba+ | Ra+ | H", [](auto& c, auto v) { c.atomic.species = v; });
      add<std::string>(app, "--state", "term such as 46S1/2", [](auto& c, auto v) { c.atomic.state = v; });
      add<double>(app, "--mj", "m_j of --state", [](auto& c, auto v) { c.atomic.mj = v; });
      add<std::string>(app, "--bra", "bra term", [](auto& c, auto v) { c.atomic.bra = v; });
      add<double>(app, "--bra-mj", "m_j of --bra", [](auto& c, auto v) { c.atomic.bra_mj = v; });
      add<int>(app, "--k", "multipole rank", [](auto& c, auto v) { c.atomic.k = v; });
      add<int>(app, "--q", "multipole component", [](auto& c, auto v) { c.atomic.q = v; });
      add<int>(app, "--points", "radial grid points", [](auto& c, auto v) { c.atomic.points = v; });
    }
    if (groups & CRYSTAL) {
      add<int>(app, "-n,--n", "number of ions", [](auto& c, auto v) { c.crystal.N = v; });
      add<double>(app, "--omega-axial", "axial trap frequency, 2pi MHz",
                  [](auto& c, auto v) { c.crystal.omega_axial = v; });
      add<double>(app, "--gamma", "radial/axial frequency ratio", [](auto& c, auto v) { c.crystal.gamma = v; });
      add<double>(app, "--mass", "ion mass, u", [](auto& c, auto v) { c.crystal.mass_u = v; });
    }
  }

  io::RunConfig resolve(const std::string& subcommand) const {
    io::RunConfig c = config_path.empty() ? io::RunConfig{} : io::load_config(config_path);
    if (!c.subcommand.empty() && c.subcommand != subcommand)
      throw config_error("cli", "config was written for '" + c.subcommand + "', not '" + subcommand + "'");
    for (const auto& o : overrides) o(c);
    c.subcommand = subcommand;
    c.validate();
    return c;
  }
};

using Handler = std::function<nlohmann::json(Context&)>;

int execute(const std::string& name, const Options& opts, const Handler& h, std::ostream& out) {
  Context ctx;
  ctx.cfg = opts.resolve(name);
  auto results = h(ctx);
  nlohmann::json summary = {
      {"format", io::summary_format}, {"config", io::config_to_json(ctx.cfg)}, {"results", results}};
  auto json_file = ctx.path("summary.json");
  auto text_file = ctx.path("summary.txt");
  io::write_json(json_file, summary);
  {
    auto t = io::open_output(text_file);
    t << ctx.text.str();
  }
  out << ctx.text.str() << "wrote " << json_file.string() << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Microwave-dressed Rydberg ion CZ gate toolkit", "rydgate"};
  app.require_subcommand(1);

  struct Entry {
    CLI::App* app;
    std::string name;
    Options opts;
    Handler handler;
  };
  std::vector<std::unique_ptr<Entry>> entries;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& full, const std::string& help,
                 unsigned groups, Handler h) {
    auto e = std::make_unique<Entry>();
    e->app = parent->add_subcommand(name, help);
    e->name = full;
    e->handler = std::move(h);
    e->opts.attach(e->app, groups);
    entries.push_back(std::move(e));
  };

  add(&app, "solve-radial", "solve-radial", "bound radial state in the model potential", ATOMIC, solve_radial_cmd);
  add(&app, "matrix-element", "matrix-element", "radial and angular matrix elements", ATOMIC, matrix_element_cmd);
  add(&app, "crystal", "crystal", "equilibrium positions and phonon modes", CRYSTAL, crystal_cmd);
  auto* pulse = app.add_subcommand("pulse", "pulse shapes");
  pulse->require_subcommand(1);
  add(pulse, "dump", "pulse dump", "sample a pulse shape to CSV", GATE | PULSE | INTEGRATOR, pulse_dump_cmd);
  add(&app, "simulate", "simulate", "evolve the two-ion gate", GATE | PULSE | INTEGRATOR, simulate_cmd);
  add(&app, "optimize", "optimize", "differential-evolution pulse optimization",
      GATE | PULSE | INTEGRATOR | OPTIMIZER, optimize_cmd);
  add(&app, "sweep-decay", "sweep-decay", "re-optimize with decay over gate times",
      GATE | PULSE | INTEGRATOR | OPTIMIZER | SWEEP, sweep_decay_cmd);
  auto* rep = app.add_subcommand("reproduce", "regenerate reported tables and figure data");
  rep->require_subcommand(1);
  add(rep, "table1", "reproduce table1", "fidelities at the reference optima", GATE | PULSE | INTEGRATOR,
      reproduce_table1);
  add(rep, "figA", "reproduce figA", "protocol A trajectory", GATE | PULSE | INTEGRATOR,
      [](Context& c) { return reproduce_fig_gate(c, Protocol::A); });
  add(rep, "figB", "reproduce figB", "protocol B trajectories", GATE | PULSE | INTEGRATOR,
      [](Context& c) { return reproduce_fig_gate(c, Protocol::B); });
  add(rep, "fig-adiabatic", "reproduce fig-adiabatic", "full vs reduced model", GATE | PULSE | INTEGRATOR,
      reproduce_fig_adiabatic);
  add(rep, "fig-decay", "reproduce fig-decay", "decay sweeps in both regimes",
      GATE | INTEGRATOR | OPTIMIZER | SWEEP, reproduce_fig_decay);
  add(rep, "fig-distances", "reproduce fig-distances", "ion spacing scaling", 0, reproduce_fig_distances);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : config_error("cli", "").exit_status();
  }

  for (const auto& e : entries) {
    if (!e->app->parsed()) continue;
    try {
      return execute(e->name, e->opts, e->handler, out);
    } catch (const Error& ex) {
      err << "rydgate: error[" << ex.code() << "]: " << ex.what() << "\n";
      return ex.exit_status();
    } catch (const std::exception& ex) {
      err << "rydgate: error: " << ex.what() << "\n";
      return 1;
    }
  }
  err << "rydgate: no subcommand\n";
  return config_error("cli", "").exit_status();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"rydgate"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rydgate::cli
