#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydgate/error.hpp"
#include "rydgate/model.hpp"
#include "rydgate/optimize/protocols.hpp"
#include "rydgate/pulses.hpp"

namespace rydgate::io {

using nlohmann::json;

inline constexpr const char* config_format = "rydgate-run/1";
inline constexpr const char* summary_format = "rydgate-summary/1";

struct GateSection {
  std::optional<optimize::Regime> regime;
  std::optional<double> V, Omega_MW, tau;  // 2pi x MHz, us
};

struct PulseSection {
  std::optional<Protocol> protocol;  // B when unset
  std::optional<std::vector<double>> x;  // Omega0, delta0[, Delta0]; default is the reference optimum
};

struct OptimizerSection {
  optimize::ObjectiveKind objective = optimize::ObjectiveKind::sqr;
  optimize::DEConfig de;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::optional<std::vector<double>> warm_start;
};

struct AtomicSection {
  std::string species = "Sr+";
  std::string state = "46S1/2";
  double mj = 0.5;
  std::string bra = "46P1/2";
  double bra_mj = 0.5;
  int k = 1;
  int q = 0;
  int points = 20000;
};

struct CrystalSection {
  int N = 2;
  double omega_axial = 1.0;  // 2pi x MHz
  double gamma = 10.0;       // radial / axial trap frequency ratio
  double mass_u = 87.905064;
};

struct RunConfig {
  std::string subcommand;
  GateSection gate;
  PulseSection pulse;
  double gamma_R = 0;  // 1/us
  double tol = 1e-10;
  int samples = 1000;
  OptimizerSection optimizer;
  std::vector<double> taus;
  AtomicSection atomic;
  CrystalSection crystal;
  std::string out_dir = ".";
  std::string prefix = "run";

  Protocol protocol() const { return pulse.protocol.value_or(Protocol::B); }

  optimize::Regime regime() const { return gate.regime.value_or(optimize::Regime::conservative); }

  GateParams params() const {
    auto p = optimize::regime_spec(regime()).params;
    if (gate.V) p.V = *gate.V;
    if (gate.Omega_MW) p.Omega_MW = *gate.Omega_MW;
    if (gate.tau) p.tau = *gate.tau;
    p.gamma_R = gamma_R;
    return p;
  }

  std::vector<double> pulse_parameters() const {
    if (pulse.x) return *pulse.x;
    return optimize::reference_optimum(protocol(), regime());
  }

  void validate() const {
    params().validate();
    if (gamma_R < 0) throw config_error("cli", "gamma_R must be non-negative");
    if (!(tol > 0 && tol < 1)) throw config_error("cli", "tol must lie in (0, 1)");
    if (samples < 2) throw config_error("cli", "samples must be at least 2");
    if (pulse.x && static_cast<int>(pulse.x->size()) != optimize::free_parameters(protocol()))
      throw config_error("cli", std::string("protocol ") + protocol_name(protocol()) + " takes " +
                                    std::to_string(optimize::free_parameters(protocol())) + " pulse parameters");
    const auto& de = optimizer.de;
    if (de.population_factor < 1 || de.max_generations < 1 || de.workers < 1)
      throw config_error("cli", "optimizer sizes must be positive");
    if (!(de.F > 0 && de.F <= 2) || !(de.CR >= 0 && de.CR <= 1))
      throw config_error("cli", "optimizer needs F in (0, 2] and CR in [0, 1]");
    if (optimizer.seeds.empty()) throw config_error("cli", "at least one seed required");
    for (double t : taus)
      if (!(t > 0)) throw config_error("cli", "sweep taus must be positive");
    if (atomic.points < 100) throw config_error("cli", "radial grid needs at least 100 points");
    if (crystal.N < 1 || crystal.omega_axial <= 0 || crystal.gamma <= 0 || crystal.mass_u <= 0)
      throw config_error("cli", "crystal parameters must be positive");
  }
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw config_error("cli", where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw config_error("cli", "unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error("cli", std::string("bad value for '") + key + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  read(j, key, v, where);
  out = v;
}

}  // namespace detail

inline RunConfig config_from_json(const json& doc) {
  using detail::read;
  using detail::reject_unknown;
  const json& j = doc.contains("format") && doc["format"] == summary_format ? doc.at("config") : doc;
  reject_unknown(j, {"format", "subcommand", "gate", "pulse", "decay", "integrator", "optimizer", "sweep", "atomic",
                     "crystal", "output"},
                 "config");
  if (j.contains("format") && j["format"] != config_format)
    throw config_error("cli", "unsupported config format " + j["format"].dump());
  RunConfig c;
  read(j, "subcommand", c.subcommand, "config");
  try {
    if (j.contains("gate")) {
      const auto& g = j["gate"];
      reject_unknown(g, {"regime", "V", "Omega_MW", "tau"}, "gate");
      if (g.contains("regime") && !g["regime"].is_null()) c.gate.regime = optimize::parse_regime(g["regime"].get<std::string>());
      read(g, "V", c.gate.V, "gate");
      read(g, "Omega_MW", c.gate.Omega_MW, "gate");
      read(g, "tau", c.gate.tau, "gate");
    }
    if (j.contains("pulse")) {
      const auto& p = j["pulse"];
      reject_unknown(p, {"protocol", "x"}, "pulse");
      if (p.contains("protocol") && !p["protocol"].is_null()) c.pulse.protocol = parse_protocol(p["protocol"].get<std::string>());
      read(p, "x", c.pulse.x, "pulse");
    }
    if (j.contains("decay")) {
      reject_unknown(j["decay"], {"gamma_R"}, "decay");
      read(j["decay"], "gamma_R", c.gamma_R, "decay");
    }
    if (j.contains("integrator")) {
      reject_unknown(j["integrator"], {"tol", "samples"}, "integrator");
      read(j["integrator"], "tol", c.tol, "integrator");
      read(j["integrator"], "samples", c.samples, "integrator");
    }
    if (j.contains("optimizer")) {
      const auto& o = j["optimizer"];
      reject_unknown(o, {"objective", "population_factor", "F", "CR", "max_generations", "tol", "atol", "workers",
                         "seeds", "warm_start"},
                     "optimizer");
      if (o.contains("objective")) c.optimizer.objective = optimize::parse_objective(o["objective"].get<std::string>());
      auto& de = c.optimizer.de;
      read(o, "population_factor", de.population_factor, "optimizer");
      read(o, "F", de.F, "optimizer");
      read(o, "CR", de.CR, "optimizer");
      read(o, "max_generations", de.max_generations, "optimizer");
      read(o, "tol", de.tol, "optimizer");
      read(o, "atol", de.atol, "optimizer");
      read(o, "workers", de.workers, "optimizer");
      read(o, "seeds", c.optimizer.seeds, "optimizer");
      read(o, "warm_start", c.optimizer.warm_start, "optimizer");
    }
    if (j.contains("sweep")) {
      reject_unknown(j["sweep"], {"taus"}, "sweep");
      read(j["sweep"], "taus", c.taus, "sweep");
    }
    if (j.contains("atomic")) {
      const auto& a = j["atomic"];
      reject_unknown(a, {"species", "state", "mj", "bra", "bra_mj", "k", "q", "points"}, "atomic");
      read(a, "species", c.atomic.species, "atomic");
      read(a, "state", c.atomic.state, "atomic");
      read(a, "mj", c.atomic.mj, "atomic");
      read(a, "bra", c.atomic.bra, "atomic");
      read(a, "bra_mj", c.atomic.bra_mj, "atomic");
      read(a, "k", c.atomic.k, "atomic");
      read(a, "q", c.atomic.q, "atomic");
      read(a, "points", c.atomic.points, "atomic");
    }
    if (j.contains("crystal")) {
      const auto& k = j["crystal"];
      reject_unknown(k, {"N", "omega_axial", "gamma", "mass_u"}, "crystal");
      read(k, "N", c.crystal.N, "crystal");
      read(k, "omega_axial", c.crystal.omega_axial, "crystal");
      read(k, "gamma", c.crystal.gamma, "crystal");
      read(k, "mass_u", c.crystal.mass_u, "crystal");
    }
    if (j.contains("output")) {
      reject_unknown(j["output"], {"dir", "prefix"}, "output");
      read(j["output"], "dir", c.out_dir, "output");
      read(j["output"], "prefix", c.prefix, "output");
    }
  } catch (const json::exception& e) {
    throw config_error("cli", std::string("malformed config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    throw config_error("cli", e.what());
  }
  return c;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json config_to_json(const RunConfig& c) {
  const auto& de = c.optimizer.de;
  return {
      {"format", config_format},
      {"subcommand", c.subcommand},
      {"gate",
       {{"regime", c.gate.regime ? json(optimize::regime_name(*c.gate.regime)) : json(nullptr)},
        {"V", optional_json(c.gate.V)},
        {"Omega_MW", optional_json(c.gate.Omega_MW)},
        {"tau", optional_json(c.gate.tau)}}},
      {"pulse",
       {{"protocol", c.pulse.protocol ? json(protocol_name(*c.pulse.protocol)) : json(nullptr)},
        {"x", optional_json(c.pulse.x)}}},
      {"decay", {{"gamma_R", c.gamma_R}}},
      {"integrator", {{"tol", c.tol}, {"samples", c.samples}}},
      {"optimizer",
       {{"objective", optimize::objective_name(c.optimizer.objective)},
        {"population_factor", de.population_factor},
        {"F", de.F},
        {"CR", de.CR},
        {"max_generations", de.max_generations},
        {"tol", de.tol},
        {"atol", de.atol},
        {"workers", de.workers},
        {"seeds", c.optimizer.seeds},
        {"warm_start", optional_json(c.optimizer.warm_start)}}},
      {"sweep", {{"taus", c.taus}}},
      {"atomic",
       {{"species", c.atomic.species},
        {"state", c.atomic.state},
        {"mj", c.atomic.mj},
        {"bra", c.atomic.bra},
        {"bra_mj", c.atomic.bra_mj},
        {"k", c.atomic.k},
        {"q", c.atomic.q},
        {"points", c.atomic.points}}},
      {"crystal",
       {{"N", c.crystal.N},
        {"omega_axial", c.crystal.omega_axial},
        {"gamma", c.crystal.gamma},
        {"mass_u", c.crystal.mass_u}}},
      {"output", {{"dir", c.out_dir}, {"prefix", c.prefix}}},
  };
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cli", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error("cli", path.string() + ": " + e.what());
  }
}

inline RunConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

}  // namespace rydgate::io
