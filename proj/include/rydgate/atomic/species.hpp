#pragma once

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "rydgate/error.hpp"
#include "rydgate/units.hpp"

namespace rydgate::atomic {

struct Channel {
  double k1 = 0, k2 = 0, k3 = 0, r_c = 0;
};

struct IonSpecies {
  std::string name;
  int Z = 0;
  int Zc = 2;
  double alpha_d = 0;
  std::array<Channel, 4> channels{};  // s, p, d, f
  double mass = 0;                    // kg

  // switches for the hydrogen-like regression mode
  bool screening = true;
  bool spin_orbit = true;

  // l >= 4 falls back to the f channel
  const Channel& channel(int l) const { return channels[l < 3 ? l : 3]; }

  void validate() const {
    if (Z < 1 || Zc < 1 || Zc > Z) throw domain_error("atomic", name + ": bad charge numbers");
    if (!screening) return;
    if (!(alpha_d > 0) || !(mass > 0)) throw domain_error("atomic", name + ": alpha_d and mass must be positive");
    for (const auto& c : channels)
      if (!(c.k1 > 0 && c.k2 > 0 && c.k3 > 0 && c.r_c > 0))
        throw domain_error("atomic", name + ": fitting parameters must be positive");
  }
};

// Bare Coulomb -1/r, no polarization, no spin-orbit.
inline IonSpecies hydrogen_like() {
  IonSpecies h;
  h.name = "H";
  h.Z = 1;
  h.Zc = 1;
  h.alpha_d = 0;
  h.mass = 1.67262192369e-27;
  h.screening = false;
  h.spin_orbit = false;
  return h;
}

inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("RYDGATE_DATA_DIR")) return env;
#ifdef RYDGATE_DATA_DIR
  return RYDGATE_DATA_DIR;
#else
  return "data";
#endif
}

inline std::map<std::string, IonSpecies> parse_species_table(const nlohmann::json& doc) {
  std::map<std::string, IonSpecies> out;
  static const char* labels[4] = {"s", "p", "d", "f"};
  for (const auto& [name, s] : doc.at("species").items()) {
    IonSpecies sp;
    sp.name = name;
    sp.Z = s.at("Z").get<int>();
    sp.Zc = s.value("Zc", 2);
    sp.alpha_d = s.at("alpha_d").get<double>();
    sp.mass = s.at("mass").get<double>() * si::amu;
    for (int l = 0; l < 4; ++l) {
      const auto& c = s.at("channels").at(labels[l]);
      sp.channels[l] = {c.at("k1").get<double>(), c.at("k2").get<double>(), c.at("k3").get<double>(),
                        c.at("r_c").get<double>()};
    }
    sp.validate();
    out.emplace(name, sp);
  }
  return out;
}

inline std::map<std::string, IonSpecies> load_species_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("atomic", "cannot open species table " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    return parse_species_table(doc);
  } catch (const nlohmann::json::exception& e) {
    throw config_error("atomic", path.string() + ": " + e.what());
  }
}

// Looks up "Sr+" (or "Sr") in the shipped table.
inline IonSpecies species(std::string name, const std::filesystem::path& table = default_data_dir() / "species.json") {
  if (name == "H") return hydrogen_like();
  if (!name.empty() && name.back() != '+') name += '+';
  auto all = load_species_table(table);
  auto it = all.find(name);
  if (it == all.end()) throw config_error("atomic", "unknown species " + name);
  return it->second;
}

}  // namespace rydgate::atomic
