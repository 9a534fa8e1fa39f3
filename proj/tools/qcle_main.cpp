#include <fftw3.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "output.hpp"
#include "qcle/acceptance.hpp"
#include "qcle/error.hpp"
#include "qcle/fourier.hpp"
#include "qcle/kernels.hpp"
#include "qcle/mc_oracle.hpp"
#include "qcle/moments.hpp"
#include "qcle/response_time.hpp"
#include "qcle/simd.hpp"
#include "qcle/susceptibility.hpp"
#include "qcle/version.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace qcle::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Raised after the diagnostics file is written.
struct NotConverged {
  std::string what;
};

struct Run {
  RunConfig cfg;
  std::string subcommand;
  ordered_json diagnostics = ordered_json::object();
  std::vector<std::string> files;

  fs::path out(const std::string& name) {
    files.push_back(name);
    return cfg.output_dir / name;
  }
  TimeGrid time_grid() const { return TimeGrid::with_step(cfg.time_grid.t_max, cfg.time_grid.dt); }
  TimeGrid variance_grid() const { return TimeGrid::with_step(cfg.variance_grid.t_max, cfg.variance_grid.dt); }
  FreqGrid freq_grid() const { return FreqGrid::with_step(cfg.omega_max, cfg.d_omega); }
};

std::vector<double> times(const TimeGrid& g) {
  std::vector<double> t(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) t[k] = g[k];
  return t;
}

std::vector<double> omegas(const FreqGrid& g) {
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = g.at(i);
  return w;
}

void write_spectrum(Run& run, const std::string& stem, const Spectrum& s, const std::string& name) {
  std::vector<double> re(s.size()), im(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    re[i] = s.values[i].real();
    im[i] = s.values[i].imag();
  }
  write_csv(run.out(stem + ".csv"), {{"omega", omegas(s.grid)}, {name + "_re", re}, {name + "_im", im}});
  std::vector<double> loc, wre, wim;
  for (const auto& c : s.singular) {
    loc.push_back(s.location(c));
    wre.push_back(c.weight.real());
    wim.push_back(c.weight.imag());
  }
  write_csv(run.out(stem + "_singular.csv"), {{"omega", loc}, {"weight_re", wre}, {"weight_im", wim}});
}

void cmd_kernels(Run& run) {
  const auto& b = run.cfg.bath;
  const double eta = run.cfg.potential.eta;
  const TimeGrid g = run.time_grid();
  Column cq{"chi_q", {}}, cv{"chi_v", {}}, cvd{"chi_v_dot", {}}, cvi{"chi_v_integral", {}}, xi{"xi_q0_corr", {}};
  std::size_t max_terms = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = g[k];
    cq.values.push_back(chi_q(t, b.gamma, eta));
    cv.values.push_back(chi_v(t, b.gamma, eta));
    cvd.values.push_back(chi_v_dot(t, b.gamma, eta));
    cvi.values.push_back(chi_v_integral(t, b.gamma, eta));
    if (t > 0.0) {
      auto m = xi_q0_corr(t, b.gamma, b.temp, b.nu, eta, run.cfg.tol.quadrature);
      xi.values.push_back(m.value);
      max_terms = std::max(max_terms, m.terms);
    } else {
      xi.values.push_back(-std::numeric_limits<double>::infinity());
    }
  }
  write_csv(run.out("kernels_time.csv"), {{"t", times(g)}, cq, cv, cvd, cvi, xi});

  const FreqGrid fg = run.freq_grid();
  Column re{"chi_tilde_re", {}}, im{"chi_tilde_im", {}}, psd{"noise_psd", {}};
  for (std::size_t i = 0; i < fg.size(); ++i) {
    const cplx c = chi_tilde(fg.at(i), b.gamma, eta);
    re.values.push_back(c.real());
    im.values.push_back(c.imag());
    psd.values.push_back(noise_psd(fg.at(i), b.gamma, b.temp, b.nu));
  }
  write_csv(run.out("kernels_freq.csv"), {{"omega", omegas(fg)}, re, im, psd});
  run.diagnostics["matsubara_max_terms"] = max_terms;
}

void cmd_moments(Run& run) {
  const auto& cfg = run.cfg;
  const TimeGrid g = run.time_grid();
  const VarianceParts parts = variance_parts(g, cfg.bath, cfg.potential);
  const SampledSignal s2 = parts.total();
  std::optional<MeanTrajectory> mean;
  std::string failure;
  try {
    mean = mean_trajectory(cfg.initial, cfg.potential, cfg.bath, s2, cfg.tol.djm);
  } catch (const NumericalError& e) {
    failure = e.what();
  }

  std::vector<double> g_values = mean ? mean->mean.values : std::vector<double>(g.size(), std::nan(""));
  write_csv(run.out("moments.csv"), {{"t", times(g)},
                                     {"mean", g_values},
                                     {"variance", s2.values},
                                     {"variance_thermal", parts.thermal.values},
                                     {"variance_noise", parts.noise.values},
                                     {"variance_cross", parts.cross.values}});
  run.diagnostics["mean"] = mean ? ordered_json{{"converged", mean->converged}, {"term_norms", mean->term_norms}}
                                 : ordered_json{{"converged", false}, {"error", failure}};

  const SampledSignal long_s2 = variance(run.variance_grid(), cfg.bath, cfg.potential);
  const Spectrum spec = variance_spectrum(long_s2, run.freq_grid(), cfg.tol.plateau);
  write_spectrum(run, "variance_spectrum", spec, "sigma2_hat");
  run.diagnostics["equilibrium_variance"] = long_s2.values.back();
  if (!mean) throw NotConverged{failure};
}

void cmd_response(Run& run) {
  const auto& cfg = run.cfg;
  const TimeGrid g = run.time_grid();
  ResponseProblem problem{cfg.potential, cfg.bath, variance(g, cfg.bath, cfg.potential), g};
  const auto djm = solve_response_djm(problem, cfg.tol.djm);
  const double dt_sub = g.dt() / 10.0;
  const SampledSignal rk = integrate_duffing(problem, dt_sub);
  write_csv(run.out("response.csv"), {{"t", times(g)}, {"r_djm", djm.r.values}, {"r_rk4", rk.values}});
  run.diagnostics["djm"] = {{"converged", djm.converged},
                            {"windows", djm.windows},
                            {"term_norms", djm.term_norms},
                            {"telescoping_residuals", djm.telescoping_residuals},
                            {"ode_residual", ode_residual(djm.r, problem)}};
  run.diagnostics["rk4"] = {{"dt_sub", dt_sub}, {"ode_residual", ode_residual(rk, problem)}};
  run.diagnostics["sup_difference"] = sup_distance(djm.r, rk);
  if (!djm.converged) throw NotConverged{"response recursion did not reach tolerance"};
}

void cmd_susceptibility(Run& run) {
  const auto& cfg = run.cfg;
  const FreqGrid fg = run.freq_grid();
  const SampledSignal s2 = variance(run.variance_grid(), cfg.bath, cfg.potential);
  SusceptibilityProblem problem{cfg.potential, cfg.bath, variance_spectrum(s2, fg, cfg.tol.plateau), fg};
  const auto sol = solve_susceptibility(problem, cfg.tol.djm);
  write_spectrum(run, "susceptibility", sol.chi, "chi");
  double max_imag = 0.0;
  const SampledSignal r = response_from_susceptibility(sol.chi, run.time_grid(), cfg.tol.edge, &max_imag);
  write_csv(run.out("reconstructed_response.csv"), {{"t", times(r.grid)}, {"r", r.values}});
  run.diagnostics["susceptibility"] = {{"converged", sol.converged},
                                       {"terms", sol.terms},
                                       {"term_norms", sol.term_norms},
                                       {"telescoping_residuals", sol.telescoping_residuals},
                                       {"hermitian", sol.chi.is_hermitian()},
                                       {"max_imag_residue", max_imag}};
  if (!sol.converged) throw NotConverged{"susceptibility recursion did not reach tolerance"};
}

void cmd_mc(Run& run) {
  const auto& cfg = run.cfg;
  const TimeGrid g = TimeGrid::with_step(cfg.time_grid.t_max, cfg.mc.dt);
  McOptions opts;
  opts.workers = cfg.mc.workers;
  opts.stride = cfg.mc.stride;
  opts.thermal_v0 = cfg.mc.thermal_v0;
  opts.temp = cfg.bath.temp;
  const auto ens = integrate_qcle(sample_noise(g, cfg.bath, cfg.mc.n_paths, cfg.mc.seed), cfg.potential,
                                  cfg.bath.gamma, cfg.initial.q0, cfg.initial.v0, opts);
  const auto est = estimate_moments(ens);
  write_csv(run.out("mc_moments.csv"), {{"t", times(est.mean.grid)},
                                        {"mean", est.mean.values},
                                        {"variance", est.variance.values},
                                        {"stderr_mean", est.stderr_mean.values},
                                        {"stderr_variance", est.stderr_variance.values}});
  run.diagnostics["ensemble"] = {{"n_paths", ens.n_paths}, {"excluded", ens.n_excluded}, {"seed", cfg.mc.seed}};
  if (cfg.mc.kick != 0.0) {
    const auto resp = estimate_response(cfg.potential, cfg.bath, g, cfg.mc.kick, cfg.mc.n_paths, cfg.mc.seed, opts);
    write_csv(run.out("mc_response.csv"), {{"t", times(resp.r.grid)}, {"r", resp.r.values}, {"stderr", resp.stderr_r.values}});
    run.diagnostics["response_paths_used"] = resp.n_used;
  }
}

int cmd_validate(Run& run, std::optional<std::uint64_t> seed) {
  acceptance::Settings settings;
  if (seed) settings.seed = *seed;
  run.diagnostics["settings"] = {{"seed", settings.seed}, {"mc_paths", settings.mc_paths}, {"nonlinear_temp", settings.nonlinear_temp}};
  const auto outcomes = acceptance::run_all(settings, run.cfg.criteria);
  Column id{"criterion", {}}, passed{"passed", {}}, secs{"seconds", {}};
  bool all = true;
  ordered_json details = ordered_json::array();
  for (const auto& o : outcomes) {
    std::cout << acceptance::format(o) << '\n';
    id.values.push_back(o.id);
    passed.values.push_back(o.passed ? 1.0 : 0.0);
    secs.values.push_back(o.seconds);
    details.push_back({{"criterion", o.id}, {"title", o.title}, {"passed", o.passed}, {"detail", o.detail}});
    all = all && o.passed;
  }
  write_csv(run.out("validate.csv"), {id, passed, secs});
  run.diagnostics["criteria"] = details;
  return all ? kExitOk : kExitFailed;
}

void write_manifest(Run& run, int status, const std::string& error) {
  ordered_json m;
  m["subcommand"] = run.subcommand;
  m["status"] = status;
  if (!error.empty()) m["error"] = error;
  m["config"] = run.cfg.to_json();
  m["diagnostics"] = run.diagnostics;
  m["files"] = run.files;
  m["versions"] = {{"qcle", kVersion},
                   {"fftw", std::string(fftw_version)},
                   {"compiler", __VERSION__},
                   {"simd", std::string(simd::isa_name(simd::active_isa()))}};
  write_json(run.cfg.output_dir / "manifest.json", m);
}

int execute(const std::string& subcommand, const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
  Run run;
  run.subcommand = subcommand;
  try {
    run.cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!out_dir.empty()) run.cfg.output_dir = out_dir;
  if (seed) run.cfg.mc.seed = *seed;

  std::error_code ec;
  fs::create_directories(run.cfg.output_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << run.cfg.output_dir << ": " << ec.message() << '\n';
    return kExitConfig;
  }

  int status = kExitOk;
  std::string error;
  try {
    if (subcommand == "kernels") cmd_kernels(run);
    else if (subcommand == "moments") cmd_moments(run);
    else if (subcommand == "response") cmd_response(run);
    else if (subcommand == "susceptibility") cmd_susceptibility(run);
    else if (subcommand == "mc") cmd_mc(run);
    else if (subcommand == "validate") status = cmd_validate(run, seed);
  } catch (const NotConverged& e) {
    status = kExitNumerical;
    error = e.what;
  } catch (const NumericalError& e) {
    status = kExitNumerical;
    error = e.what();
  } catch (const std::invalid_argument& e) {
    // Domain and precondition errors trace back to the configured values.
    status = kExitConfig;
    error = e.what();
  } catch (const std::domain_error& e) {
    status = kExitConfig;
    error = e.what();
  }
  if (!error.empty()) std::cerr << subcommand << ": " << error << '\n';
  write_manifest(run, status, error);
  return status;
}

}  // namespace
}  // namespace qcle::cli

int main(int argc, char** argv) {
  CLI::App app{"Quasiclassical Langevin moments, response and susceptibility"};
  app.require_subcommand(1);
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::string chosen;
  for (const char* name : {"kernels", "moments", "response", "susceptibility", "mc", "validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }
  return qcle::cli::execute(chosen, config, out, seed);
}
