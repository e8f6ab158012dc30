#pragma once

#include <filesystem>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "rydgate/io/config.hpp"

namespace rydgate::cli {

struct Context {
  io::RunConfig cfg;
  std::ostringstream text;  // human-readable summary

  std::filesystem::path path(const std::string& suffix) const {
    return std::filesystem::path(cfg.out_dir) / (cfg.prefix + "_" + suffix);
  }
};

nlohmann::json solve_radial_cmd(Context& c);
nlohmann::json matrix_element_cmd(Context& c);
nlohmann::json crystal_cmd(Context& c);
nlohmann::json pulse_dump_cmd(Context& c);
nlohmann::json simulate_cmd(Context& c);
nlohmann::json optimize_cmd(Context& c);
nlohmann::json sweep_decay_cmd(Context& c);
nlohmann::json reproduce_table1(Context& c);
nlohmann::json reproduce_fig_gate(Context& c, Protocol p);
nlohmann::json reproduce_fig_adiabatic(Context& c);
nlohmann::json reproduce_fig_decay(Context& c);
nlohmann::json reproduce_fig_distances(Context& c);

}  // namespace rydgate::cli
