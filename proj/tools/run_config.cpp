#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qcle::cli {
namespace {

using nlohmann::json;

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Reads fields and reports errors against the line where the key appears.
class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    std::ostringstream os;
    os << source_ << ":" << locate(path) << ": " << path << ": " << msg;
    throw ConfigError(os.str());
  }

  const json& object(const json& parent, const std::string& path, const std::string& key, bool required) const {
    static const json empty = json::object();
    if (!parent.contains(key)) {
      if (required) fail(path + "/" + key, "missing required field");
      return empty;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) fail(path + "/" + key, "expected an object");
    return v;
  }

  double number(const json& obj, const std::string& path, const std::string& key, double fallback,
                bool required = false) const {
    if (!obj.contains(key)) {
      if (required) fail(path + "/" + key, "missing required field");
      return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "/" + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path + "/" + key, "must be finite");
    return d;
  }

  double positive(const json& obj, const std::string& path, const std::string& key, double fallback,
                  bool required = false) const {
    const double d = number(obj, path, key, fallback, required);
    if (!(d > 0.0)) fail(path + "/" + key, "must be > 0");
    return d;
  }

  std::uint64_t count(const json& obj, const std::string& path, const std::string& key, std::uint64_t fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(path + "/" + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool flag(const json& obj, const std::string& path, const std::string& key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) fail(path + "/" + key, "expected true or false");
    return obj.at(key).get<bool>();
  }

 private:
  // Line of the last key on the path, searched after the keys before it.
  std::size_t locate(const std::string& path) const {
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '/')) {
      if (part.empty()) continue;
      const auto at = text_.find("\"" + part + "\"", pos);
      if (at == std::string::npos) break;
      found = at;
      pos = at + 1;
    }
    // A missing key reports the line of its enclosing object.
    return found == std::string::npos ? 1 : line_of_offset(text_, found);
  }

  const std::string& text_;
  std::string source_;
};

}  // namespace

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["potential"] = {{"eta", potential.eta}, {"alpha", potential.alpha}, {"epsilon", potential.epsilon}, {"f0", potential.f0}};
  j["bath"] = {{"gamma", bath.gamma}, {"temp", bath.temp}, {"nu", bath.nu}};
  j["initial"] = {{"q0", initial.q0}, {"v0", initial.v0}, {"drop_v0", initial.drop_v0}};
  j["time_grid"] = {{"t_max", time_grid.t_max}, {"dt", time_grid.dt}};
  j["variance_grid"] = {{"t_max", variance_grid.t_max}, {"dt", variance_grid.dt}};
  j["freq_grid"] = {{"omega_max", omega_max}, {"d_omega", d_omega}};
  j["tolerances"] = {{"djm", tol.djm}, {"quadrature", tol.quadrature}, {"edge", tol.edge}, {"plateau", tol.plateau}};
  j["mc"] = {{"n_paths", mc.n_paths}, {"seed", mc.seed},   {"dt", mc.dt},           {"stride", mc.stride},
             {"kick", mc.kick},       {"workers", mc.workers}, {"thermal_v0", mc.thermal_v0}};
  j["validate"] = {{"criteria", criteria}};
  j["output"] = output_dir.string();
  return j;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0) << ": syntax error: " << e.what();
    throw ConfigError(os.str());
  }
  Reader rd(text, source);
  if (!root.is_object()) rd.fail("", "top level must be an object");

  RunConfig cfg;
  const json& pot = rd.object(root, "", "potential", true);
  cfg.potential.eta = rd.number(pot, "/potential", "eta", 1.0, true);
  cfg.potential.alpha = rd.number(pot, "/potential", "alpha", 0.0);
  cfg.potential.epsilon = rd.number(pot, "/potential", "epsilon", 0.0);
  cfg.potential.f0 = rd.number(pot, "/potential", "f0", 1.0);
  try {
    cfg.potential.validate();
  } catch (const std::exception& e) {
    rd.fail("/potential", e.what());
  }

  const json& bath = rd.object(root, "", "bath", true);
  cfg.bath.gamma = rd.positive(bath, "/bath", "gamma", 1.0, true);
  cfg.bath.temp = rd.positive(bath, "/bath", "temp", 1.0, true);
  cfg.bath.nu = rd.positive(bath, "/bath", "nu", 1e4, true);

  const json& init = rd.object(root, "", "initial", false);
  cfg.initial.q0 = rd.number(init, "/initial", "q0", 0.0);
  cfg.initial.v0 = rd.number(init, "/initial", "v0", 0.0);
  cfg.initial.drop_v0 = rd.flag(init, "/initial", "drop_v0", false);

  const json& tg = rd.object(root, "", "time_grid", true);
  cfg.time_grid = {rd.positive(tg, "/time_grid", "t_max", 0.0, true), rd.positive(tg, "/time_grid", "dt", 0.0, true)};
  if (cfg.time_grid.dt > cfg.time_grid.t_max) rd.fail("/time_grid/dt", "must not exceed t_max");

  const json& vg = rd.object(root, "", "variance_grid", false);
  cfg.variance_grid = {rd.positive(vg, "/variance_grid", "t_max", std::max(30.0, cfg.time_grid.t_max)),
                       rd.positive(vg, "/variance_grid", "dt", cfg.time_grid.dt)};
  if (cfg.variance_grid.t_max < cfg.time_grid.t_max) rd.fail("/variance_grid/t_max", "must cover time_grid.t_max");

  const json& fg = rd.object(root, "", "freq_grid", false);
  cfg.omega_max = rd.positive(fg, "/freq_grid", "omega_max", 50.0);
  cfg.d_omega = rd.positive(fg, "/freq_grid", "d_omega", 0.05);
  if (cfg.d_omega > cfg.omega_max) rd.fail("/freq_grid/d_omega", "must not exceed omega_max");

  const json& tol = rd.object(root, "", "tolerances", false);
  cfg.tol.djm = rd.positive(tol, "/tolerances", "djm", cfg.tol.djm);
  cfg.tol.quadrature = rd.positive(tol, "/tolerances", "quadrature", cfg.tol.quadrature);
  cfg.tol.edge = rd.positive(tol, "/tolerances", "edge", cfg.tol.edge);
  cfg.tol.plateau = rd.positive(tol, "/tolerances", "plateau", cfg.tol.plateau);

  const json& mc = rd.object(root, "", "mc", false);
  cfg.mc.n_paths = rd.count(mc, "/mc", "n_paths", cfg.mc.n_paths);
  if (cfg.mc.n_paths < 2) rd.fail("/mc/n_paths", "must be >= 2");
  cfg.mc.seed = rd.count(mc, "/mc", "seed", cfg.mc.seed);
  cfg.mc.dt = rd.positive(mc, "/mc", "dt", cfg.mc.dt);
  cfg.mc.stride = rd.count(mc, "/mc", "stride", cfg.mc.stride);
  if (cfg.mc.stride < 1) rd.fail("/mc/stride", "must be >= 1");
  cfg.mc.kick = rd.number(mc, "/mc", "kick", cfg.mc.kick);
  cfg.mc.workers = rd.count(mc, "/mc", "workers", cfg.mc.workers);
  cfg.mc.thermal_v0 = rd.flag(mc, "/mc", "thermal_v0", cfg.mc.thermal_v0);

  const json& val = rd.object(root, "", "validate", false);
  if (val.contains("criteria")) {
    const json& list = val.at("criteria");
    if (!list.is_array()) rd.fail("/validate/criteria", "expected an array of criterion numbers");
    for (const auto& item : list) {
      if (!item.is_number_integer() || item.get<int>() < 1 || item.get<int>() > 9) {
        rd.fail("/validate/criteria", "entries must be integers 1..9");
      }
      cfg.criteria.push_back(item.get<int>());
    }
  }

  if (root.contains("output")) {
    if (!root.at("output").is_string()) rd.fail("/output", "expected a path string");
    cfg.output_dir = root.at("output").get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ":0: cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace qcle::cli
