#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcle/moments.hpp"
#include "qcle/params.hpp"

namespace qcle::cli {

/// Invalid configuration; `what()` is "file:line: message".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double t_max;
  double dt;
};

struct Tolerances {
  double djm = 1e-10;
  double quadrature = 1e-8;
  double edge = 1e-3;
  double plateau = 1e-4;
};

struct McSettings {
  std::size_t n_paths = 1000;
  std::uint64_t seed = 1;
  double dt = 0.01;
  std::size_t stride = 10;
  double kick = 0.0;  ///< 0 disables the response estimate
  std::size_t workers = 0;
  bool thermal_v0 = false;
};

struct RunConfig {
  PotentialParams potential;
  BathParams bath;
  InitialState initial;
  GridSpec time_grid{10.0, 1e-3};
  GridSpec variance_grid{30.0, 1e-3};
  double omega_max = 50.0;
  double d_omega = 0.05;
  Tolerances tol;
  McSettings mc;
  std::vector<int> criteria;  ///< validate: empty runs all
  std::filesystem::path output_dir = "qcle_out";

  nlohmann::ordered_json to_json() const;
};

/// Parses and validates; `source` names the file in diagnostics.
RunConfig parse_config(const std::string& text, const std::string& source);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace qcle::cli
