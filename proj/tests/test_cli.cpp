#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "rydgate/cli.hpp"
#include "rydgate/io/config.hpp"
#include "rydgate/io/csv.hpp"
#include "rydgate/units.hpp"

using namespace rydgate;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("rydgate_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int run(std::vector<std::string> args) {
    out.str("");
    err.str("");
    args.insert(args.end(), {"-o", dir.string()});
    return cli::run(args, out, err);
  }

  json summary(const std::string& prefix = "run") { return io::read_json_file(dir / (prefix + "_summary.json")); }

  fs::path write_config(const json& j, const std::string& name = "cfg.json") {
    auto p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  fs::path dir;
  std::ostringstream out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Units, AngularFrequencyConversion) {
  EXPECT_NEAR(mhz_to_rad_us(1.0), 2 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(rad_us_to_mhz(mhz_to_rad_us(37.44)), 37.44, 1e-13);
}

TEST(Config, RoundTripsThroughJson) {
  io::RunConfig c;
  c.subcommand = "simulate";
  c.gate.regime = optimize::Regime::optimistic;
  c.gate.tau = 0.25;
  c.pulse.protocol = Protocol::A;
  c.pulse.x = std::vector<double>{1, 2};
  c.gamma_R = 0.2;
  c.optimizer.seeds = {4, 5};
  c.taus = {0.1, 0.2};
  auto j = io::config_to_json(c);
  auto back = io::config_from_json(j);
  EXPECT_EQ(io::config_to_json(back), j);
  EXPECT_EQ(back.params().tau, 0.25);
  EXPECT_EQ(back.params().V, 25);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(io::config_from_json(json{{"gate", {{"Vee", 3}}}}), Error);
  EXPECT_THROW(io::config_from_json(json{{"extra", 1}}), Error);
  EXPECT_THROW(io::config_from_json(json{{"gate", {{"V", "ten"}}}}), Error);
  try {
    io::config_from_json(json{{"optimizer", {{"popsize", 3}}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "cli.config");
    EXPECT_EQ(e.exit_status(), 14);
  }
}

TEST_F(Cli, TrivialSimulation) {
  ASSERT_EQ(run({"simulate", "--protocol", "B", "--x", "0", "0", "0", "--samples", "11"}), 0) << err.str();
  auto s = summary();
  const auto& o = s["results"]["outcome"];
  EXPECT_NEAR(o["fidelity_plain"].get<double>(), 0.25, 1e-12);
  EXPECT_NEAR(o["population_error"].get<double>(), 0, 1e-12);
  auto csv = slurp(dir / "run_trajectory.csv");
  EXPECT_EQ(csv.rfind("# rydgate trajectory v1\nt_us,", 0), 0u);
  EXPECT_NE(csv.find("phi_star"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "run_summary.txt"));
}

TEST_F(Cli, FlagsOverrideConfig) {
  json cfg = {{"gate", {{"regime", "optimistic"}, {"tau", 0.5}}}, {"integrator", {{"samples", 5}}}};
  auto path = write_config(cfg);
  ASSERT_EQ(run({"pulse", "dump", "-c", path.string(), "--tau", "0.3"}), 0) << err.str();
  auto c = summary()["config"];
  EXPECT_EQ(c["gate"]["tau"].get<double>(), 0.3);
  EXPECT_EQ(c["gate"]["regime"].get<std::string>(), "optimistic");
  EXPECT_EQ(c["integrator"]["samples"].get<int>(), 5);
}

TEST_F(Cli, SummaryReingestReproduces) {
  ASSERT_EQ(run({"simulate", "--regime", "conservative", "--protocol", "A", "--samples", "50", "--prefix", "a"}), 0);
  auto first = summary("a");
  auto path = write_config(first, "a_copy.json");
  ASSERT_EQ(run({"simulate", "-c", path.string(), "--prefix", "b"}), 0) << err.str();
  auto second = summary("b");
  EXPECT_EQ(first["results"]["outcome"], second["results"]["outcome"]);
  EXPECT_NEAR(first["results"]["outcome"]["fidelity_sqr"].get<double>(), 0.9681, 2e-3);
}

TEST_F(Cli, OptimizeIsSeedDeterministic) {
  std::vector<std::string> args = {"optimize", "--protocol", "A", "--generations", "2", "--seeds", "9"};
  auto a = args, b = args;
  a.insert(a.end(), {"--prefix", "a"});
  b.insert(b.end(), {"--prefix", "b"});
  ASSERT_EQ(run(a), 0) << err.str();
  ASSERT_EQ(run(b), 0) << err.str();
  EXPECT_EQ(summary("a")["results"]["best"], summary("b")["results"]["best"]);
  std::ifstream log(dir / "a_optimize.ndjson");
  std::string line;
  ASSERT_TRUE(std::getline(log, line));
  auto entry = json::parse(line);
  EXPECT_EQ(entry["seed"].get<int>(), 9);
  EXPECT_TRUE(entry.contains("config"));
  EXPECT_TRUE(entry.contains("history"));
}

TEST_F(Cli, CrystalThreeIons) {
  ASSERT_EQ(run({"crystal", "--n", "3"}), 0) << err.str();
  auto modes = summary()["results"]["modes"];
  ASSERT_EQ(modes.size(), 3u);
  bool found = false;
  for (const auto& m : modes) found = found || std::abs(m["gamma2"].get<double>() - 2.4) < 1e-10;
  EXPECT_TRUE(found);
}

TEST_F(Cli, ReproduceTableProtocolB) {
  ASSERT_EQ(run({"reproduce", "table1", "--regime", "conservative", "--protocol", "B"}), 0) << err.str();
  EXPECT_NE(out.str().find("F = 99.98 %"), std::string::npos) << out.str();
}

TEST_F(Cli, ErrorsMapToExitCodes) {
  EXPECT_EQ(run({"simulate", "--no-such-flag"}), 14);
  EXPECT_EQ(run({"simulate", "--protocol", "B", "--x", "1", "2"}), 14);
  EXPECT_NE(err.str().find("error[cli.config]"), std::string::npos);
  EXPECT_EQ(run({"simulate", "--tau", "-1"}), 10);
  EXPECT_NE(err.str().find("error[model.domain]"), std::string::npos);
  EXPECT_EQ(run({"simulate", "-c", (dir / "missing.json").string()}), 14);
  EXPECT_EQ(run({"matrix-element", "--state", "46S3/2"}), 10);
}

TEST_F(Cli, ConfigForOtherSubcommandRejected) {
  ASSERT_EQ(run({"pulse", "dump", "--samples", "3"}), 0);
  EXPECT_EQ(run({"crystal", "-c", (dir / "run_summary.json").string()}), 14);
}
