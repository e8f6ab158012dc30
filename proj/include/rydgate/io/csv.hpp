#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydgate/dynamics.hpp"
#include "rydgate/error.hpp"
#include "rydgate/gatemetrics.hpp"
#include "rydgate/model.hpp"

namespace rydgate::io {

inline std::ofstream open_output(const std::filesystem::path& path, bool append = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw config_error("cli", "cannot write " + path.string());
  out.precision(12);
  return out;
}

// Fixed-column table; first line is "# <schema>", second the column names.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& schema, std::vector<std::string> columns)
      : out_(open_output(path)), columns_(std::move(columns)) {
    out_ << "# " << schema << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << "\n";
  }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw domain_error("cli", "csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
    out_ << "\n";
  }

  void cells(const std::vector<std::variant<double, std::string>>& cells) {
    if (cells.size() != columns_.size()) throw domain_error("cli", "csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      std::visit([&](const auto& v) { out_ << v; }, cells[i]);
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
  std::vector<std::string> columns_;
};

inline std::vector<std::string> trajectory_columns() {
  std::vector<std::string> cols{"t_us"};
  for (int i = 0; i < StateBasis::dim; ++i) cols.push_back("p_" + StateBasis::label(i));
  for (const char* s : {"phi_00", "phi_01", "phi_10", "phi_11"}) cols.push_back(s);
  cols.push_back("phi_star");
  cols.push_back("norm");
  return cols;
}

inline void write_trajectory(const std::filesystem::path& path, const Trajectory& tr) {
  CsvWriter w(path, "rydgate trajectory v1", trajectory_columns());
  std::vector<double> row;
  for (std::size_t s = 0; s < tr.size(); ++s) {
    row.assign(1, tr.times[s]);
    for (int i = 0; i < StateBasis::dim; ++i) row.push_back(tr.populations[s](i));
    for (int idx : StateBasis::computational) row.push_back(tr.phases[s](idx));
    row.push_back(entangling_phase(tr, s));
    row.push_back(tr.norm[s]);
    w.row(row);
  }
}

// One JSON object per line, appended.
class NdjsonLog {
 public:
  explicit NdjsonLog(const std::filesystem::path& path) : out_(open_output(path, true)) {}
  void write(const nlohmann::json& j) { out_ << j.dump() << "\n" << std::flush; }

 private:
  std::ofstream out_;
};

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_output(path);
  out << j.dump(2) << "\n";
}

}  // namespace rydgate::io
