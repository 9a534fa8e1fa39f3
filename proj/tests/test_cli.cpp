#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "output.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using qcle::cli::ConfigError;
using qcle::cli::parse_config;

namespace {

const char* kMinimal = R"({
  "potential": {"eta": 1.0, "alpha": 0.0},
  "bath": {"gamma": 1.0, "temp": 1.0, "nu": 10000.0},
  "time_grid": {"t_max": 2.0, "dt": 0.01}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qcle_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(QCLE_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ParseConfig, MinimalDefaults) {
  const auto c = parse_config(kMinimal, "cfg.json");
  EXPECT_EQ(c.potential.f0, 1.0);
  EXPECT_EQ(c.initial.q0, 0.0);
  EXPECT_EQ(c.variance_grid.t_max, 30.0);
  EXPECT_EQ(c.variance_grid.dt, 0.01);
  EXPECT_EQ(c.tol.djm, 1e-10);
  EXPECT_TRUE(c.criteria.empty());
}

TEST(ParseConfig, MissingFieldNamesLine) {
  const std::string text = R"({
  "potential": {"eta": 1.0, "alpha": 0.0},
  "bath": {"gamma": 1.0, "temp": 1.0},
  "time_grid": {"t_max": 2.0, "dt": 0.01}
})";
  const std::string msg = message_of(text);
  EXPECT_NE(msg.find("cfg.json:3:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("nu"), std::string::npos) << msg;
}

TEST(ParseConfig, SyntaxErrorNamesLine) {
  const std::string msg = message_of("{\n  \"potential\": {\"eta\": 1.0,,}\n}");
  EXPECT_NE(msg.find("cfg.json:2:"), std::string::npos) << msg;
}

TEST(ParseConfig, RejectsInvalidValues) {
  std::string text = kMinimal;
  text.replace(text.find("\"gamma\": 1.0"), 12, "\"gamma\": -1.0");
  EXPECT_FALSE(message_of(text).empty());
  text = kMinimal;
  text.replace(text.find("\"dt\": 0.01"), 10, "\"dt\": \"x\"");
  EXPECT_NE(message_of(text).find("cfg.json:4:"), std::string::npos);
}

TEST(ParseConfig, EchoRoundTrips) {
  const auto c = parse_config(kMinimal, "cfg.json");
  const auto again = parse_config(c.to_json().dump(), "echo.json");
  EXPECT_EQ(again.to_json(), c.to_json());
}

TEST(Output, CsvKeepsFullPrecision) {
  const fs::path dir = scratch("csv");
  const double x = 0.1 + 0.2;
  qcle::cli::write_csv(dir / "a.csv", {{"t", {x, 1.0 / 3.0}}, {"y", {-2.5e-300, 7.0}}});
  std::ifstream in(dir / "a.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "t,y");
  EXPECT_EQ(std::stod(row.substr(0, row.find(','))), x);
  EXPECT_EQ(std::stod(row.substr(row.find(',') + 1)), -2.5e-300);
}

TEST(Cli, MissingFieldExitsTwo) {
  const fs::path dir = scratch("missing");
  const auto cfg = write_config(dir, R"({"potential": {"eta": 1.0}})");
  EXPECT_EQ(run("kernels --config " + cfg.string() + " --out " + dir.string()), 2);
  EXPECT_EQ(run("nonsense --config " + cfg.string()), 2);
}

TEST(Cli, KernelsAreByteIdenticalAcrossRuns) {
  const fs::path dir = scratch("repeat");
  const auto cfg = write_config(dir, kMinimal);
  ASSERT_EQ(run("kernels --config " + cfg.string() + " --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run("kernels --config " + cfg.string() + " --out " + (dir / "b").string()), 0);
  for (const char* f : {"kernels_time.csv", "kernels_freq.csv"}) {
    EXPECT_FALSE(slurp(dir / "a" / f).empty());
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
}

TEST(Cli, McIsReproducibleAndRecordsSeed) {
  const fs::path dir = scratch("mc");
  std::string text = kMinimal;
  text.insert(text.rfind('}'), R"(, "mc": {"n_paths": 40, "seed": 5, "dt": 0.01, "stride": 10, "kick": 0.1})");
  const auto cfg = write_config(dir, text);
  ASSERT_EQ(run("mc --config " + cfg.string() + " --out " + (dir / "a").string() + " --seed 12"), 0);
  ASSERT_EQ(run("mc --config " + cfg.string() + " --out " + (dir / "b").string() + " --seed 12"), 0);
  EXPECT_EQ(slurp(dir / "a" / "mc_moments.csv"), slurp(dir / "b" / "mc_moments.csv"));
  EXPECT_EQ(slurp(dir / "a" / "mc_response.csv"), slurp(dir / "b" / "mc_response.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  EXPECT_EQ(manifest["status"], 0);
  EXPECT_EQ(manifest["config"]["mc"]["seed"], 12);
  EXPECT_EQ(manifest["config"]["tolerances"]["djm"], 1e-10);
}

TEST(Cli, DivergentMeanExitsThree) {
  const fs::path dir = scratch("diverge");
  const auto cfg = write_config(dir, R"({
  "potential": {"eta": 1.0, "alpha": 5.0},
  "bath": {"gamma": 1.0, "temp": 1.0, "nu": 10000.0},
  "initial": {"q0": 20.0, "v0": 0.0},
  "time_grid": {"t_max": 10.0, "dt": 0.01},
  "variance_grid": {"t_max": 30.0, "dt": 0.01}
})");
  EXPECT_EQ(run("moments --config " + cfg.string() + " --out " + dir.string()), 3);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["status"], 3);
  EXPECT_FALSE(manifest["error"].get<std::string>().empty());
}

TEST(Cli, ValidateHarmonicPreset) {
  const fs::path dir = scratch("validate");
  EXPECT_EQ(run(std::string("validate --config ") + QCLE_CONFIG_DIR + "/harmonic.json --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "validate.csv"));
}
