#include "qcle/mc_oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include "qcle/error.hpp"

namespace qcle {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

class PairSynth {
 public:
  explicit PairSynth(std::size_t len) : len_(len) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * len));
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(len), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~PairSynth() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
  }
  PairSynth(const PairSynth&) = delete;
  PairSynth& operator=(const PairSynth&) = delete;

  fftw_complex* data() { return buf_; }
  void run() { fftw_execute(plan_); }

 private:
  std::size_t len_;
  fftw_complex* buf_;
  fftw_plan plan_;
};

std::mt19937_64 pair_stream(std::uint64_t seed, std::size_t p) {
  const auto pp = static_cast<std::uint64_t>(p);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(pp), static_cast<std::uint32_t>(pp >> 32), 0x51ebu};
  return std::mt19937_64(seq);
}

void synth_pair(const DiscreteNoise& noise, std::uint64_t seed, std::size_t p, PairSynth& synth,
                std::vector<double>& a, std::vector<double>& b, std::vector<double>* extra) {
  auto rng = pair_stream(seed, p);
  std::normal_distribution<double> normal;
  const std::size_t len = noise.fft_len;
  const std::size_t half = len / 2;
  fftw_complex* z = synth.data();
  for (std::size_t j = 0; j < len; ++j) {
    const double s = std::sqrt(noise.mode_variance[j <= half ? j : len - j]);
    const double g1 = normal(rng);
    const double g2 = normal(rng);
    z[j][0] = s * g1;
    z[j][1] = s * g2;
  }
  if (extra) {
    for (auto& e : *extra) e = normal(rng);
  }
  synth.run();
  const std::size_t n = noise.grid.size();
  a.resize(n);
  b.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = z[k][0];
    b[k] = z[k][1];
  }
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(w, jobs));
}

template <class Fn>
void parallel_pairs(std::size_t n_pairs, std::size_t workers, Fn fn) {
  if (workers <= 1) {
    fn(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(fn, w, workers);
  for (auto& t : pool) t.join();
  (void)n_pairs;
}

struct Stepper {
  double gamma, eta, alpha, eps;

  double accel(double q, double v, double xi) const { return -gamma * v - eta * q - alpha * q * q * q - eps + xi; }

  // Integrates one path; returns false on blowup.
  bool run(const std::vector<double>& xi, double dt, double q, double v, std::size_t stride, double guard,
           std::vector<double>& out) const {
    const std::size_t n = xi.size();
    out.assign((n - 1) / stride + 1, 0.0);
    out[0] = q;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double f = xi[k];
      const double k1q = v, k1v = accel(q, v, f);
      const double k2q = v + 0.5 * dt * k1v, k2v = accel(q + 0.5 * dt * k1q, k2q, f);
      const double k3q = v + 0.5 * dt * k2v, k3v = accel(q + 0.5 * dt * k2q, k3q, f);
      const double k4q = v + dt * k3v, k4v = accel(q + dt * k3q, k4q, f);
      q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
      v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      if (!(std::abs(q) <= guard) || !std::isfinite(v)) return false;
      if ((k + 1) % stride == 0) out[(k + 1) / stride] = q;
    }
    return true;
  }
};

TimeGrid strided_grid(const TimeGrid& g, std::size_t stride) {
  if (stride == 0 || (g.size() - 1) % stride != 0) {
    throw PreconditionError("stride must divide the number of grid steps");
  }
  return TimeGrid(g.t_max(), (g.size() - 1) / stride + 1);
}

}  // namespace

NoiseEnsemble::NoiseEnsemble(DiscreteNoise noise, std::size_t n_paths, std::uint64_t seed)
    : noise_(std::move(noise)), n_paths_(n_paths), seed_(seed) {
  if (n_paths_ < 1) throw PreconditionError("NoiseEnsemble: n_paths must be >= 1");
}

void NoiseEnsemble::draw_pair(std::size_t p, std::vector<double>& a, std::vector<double>& b,
                              std::vector<double>* extra) const {
  PairSynth synth(noise_.fft_len);
  synth_pair(noise_, seed_, p, synth, a, b, extra);
}

std::vector<double> NoiseEnsemble::path(std::size_t i) const {
  if (i >= n_paths_) throw PreconditionError("NoiseEnsemble::path: index out of range");
  std::vector<double> a, b;
  draw_pair(i / 2, a, b);
  return i % 2 ? b : a;
}

NoiseEnsemble sample_noise(const TimeGrid& grid, const BathParams& bath, std::size_t n_paths, std::uint64_t seed) {
  return NoiseEnsemble(make_discrete_noise(grid, bath), n_paths, seed);
}

NoiseEnsemble zero_noise(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed) {
  const std::size_t len = std::bit_ceil(2 * grid.size());
  DiscreteNoise silent{grid, len, std::vector<double>(len / 2 + 1, 0.0), std::vector<double>(grid.size(), 0.0)};
  return NoiseEnsemble(std::move(silent), n_paths, seed);
}

Ensemble integrate_qcle(const NoiseEnsemble& noise, const PotentialParams& potential, double gamma, double q0,
                        double v0, const McOptions& opts) {
  potential.validate();
  const TimeGrid& grid = noise.grid();
  const TimeGrid out_grid = strided_grid(grid, opts.stride);
  const std::size_t n_paths = noise.n_paths();
  const std::size_t n_pairs = (n_paths + 1) / 2;
  const double v_scale = opts.thermal_v0 ? std::sqrt(opts.temp) : 0.0;
  const Stepper step{gamma, potential.eta, potential.alpha, potential.epsilon};

  Ensemble ens{out_grid, n_paths, noise.seed(), std::vector<std::vector<double>>(n_paths), std::vector<bool>(n_paths),
               0};
  std::vector<char> bad(n_paths, 0);
  parallel_pairs(n_pairs, worker_count(opts.workers, n_pairs), [&](std::size_t w, std::size_t nw) {
    PairSynth synth(noise.noise().fft_len);
    std::vector<double> a, b, extra(2);
    for (std::size_t p = w; p < n_pairs; p += nw) {
      synth_pair(noise.noise(), noise.seed(), p, synth, a, b, &extra);
      for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t i = 2 * p + s;
        if (i >= n_paths) break;
        const double v_init = v0 + v_scale * extra[s];
        if (!step.run(s ? b : a, grid.dt(), q0, v_init, opts.stride, opts.overflow_guard, ens.trajectories[i])) {
          bad[i] = 1;
        }
      }
    }
  });
  for (std::size_t i = 0; i < n_paths; ++i) {
    ens.excluded[i] = bad[i] != 0;
    ens.n_excluded += bad[i];
  }
  return ens;
}

MomentEstimate estimate_moments(const Ensemble& ensemble) {
  if (ensemble.excluded.size() != ensemble.n_paths || ensemble.trajectories.size() != ensemble.n_paths) {
    throw DomainError("estimate_moments: ensemble bookkeeping is inconsistent");
  }
  const auto n_bad = std::count(ensemble.excluded.begin(), ensemble.excluded.end(), true);
  const std::size_t used = ensemble.n_paths - static_cast<std::size_t>(n_bad);
  if (used < 2) throw PreconditionError("estimate_moments: need at least two usable paths");
  const TimeGrid& g = ensemble.grid;
  const std::size_t n = g.size();
  MomentEstimate est{SampledSignal(g), SampledSignal(g), SampledSignal(g), SampledSignal(g), used};
  const double m = static_cast<double>(used);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ensemble.n_paths; ++i) {
      if (!ensemble.excluded[i]) sum += ensemble.trajectories[i][k];
    }
    const double mean = sum / m;
    double m2 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < ensemble.n_paths; ++i) {
      if (ensemble.excluded[i]) continue;
      const double d = ensemble.trajectories[i][k] - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    const double var = m2 / (m - 1.0);
    const double c2 = m2 / m;
    const double c4 = m4 / m;
    est.mean[k] = mean;
    est.variance[k] = var;
    est.stderr_mean[k] = std::sqrt(var / m);
    est.stderr_variance[k] = std::sqrt(std::max(0.0, c4 - c2 * c2) / m);
  }
  return est;
}

ResponseEstimate estimate_response(const PotentialParams& potential, const BathParams& bath, const TimeGrid& grid,
                                   double f0_kick, std::size_t n_paths, std::uint64_t seed, const McOptions& opts) {
  potential.validate();
  if (f0_kick == 0.0) throw DomainError("estimate_response: kick must be nonzero");
  const NoiseEnsemble noise = sample_noise(grid, bath, n_paths, seed);
  const TimeGrid out_grid = strided_grid(grid, opts.stride);
  const std::size_t n_out = out_grid.size();
  const std::size_t n_pairs = (n_paths + 1) / 2;
  const std::size_t workers = worker_count(opts.workers, n_pairs);
  const double v_scale = opts.thermal_v0 ? std::sqrt(opts.temp) : 0.0;
  const Stepper step{bath.gamma, potential.eta, potential.alpha, potential.epsilon};

  // Per-path differences, reduced in path order so the result does not depend on the worker count.
  std::vector<std::vector<double>> diff(n_paths);
  std::vector<char> bad(n_paths, 0);
  parallel_pairs(n_pairs, workers, [&](std::size_t w, std::size_t nw) {
    PairSynth synth(noise.noise().fft_len);
    std::vector<double> a, b, extra(2), base, kicked;
    for (std::size_t p = w; p < n_pairs; p += nw) {
      synth_pair(noise.noise(), seed, p, synth, a, b, &extra);
      for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t i = 2 * p + s;
        if (i >= n_paths) break;
        const double v_init = v_scale * extra[s];
        const auto& xi = s ? b : a;
        const bool ok = step.run(xi, grid.dt(), 0.0, v_init, opts.stride, opts.overflow_guard, base) &&
                        step.run(xi, grid.dt(), 0.0, v_init + f0_kick, opts.stride, opts.overflow_guard, kicked);
        if (!ok) {
          bad[i] = 1;
          continue;
        }
        auto& d = diff[i];
        d.resize(n_out);
        for (std::size_t k = 0; k < n_out; ++k) d[k] = (kicked[k] - base[k]) / f0_kick;
      }
    }
  });

  std::size_t used = 0;
  for (std::size_t i = 0; i < n_paths; ++i) used += bad[i] ? 0 : 1;
  if (used < 2) throw NumericalError("estimate_response: fewer than two usable paths");
  ResponseEstimate est{SampledSignal(out_grid), SampledSignal(out_grid), used};
  const double m = static_cast<double>(used);
  for (std::size_t k = 0; k < n_out; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
      if (!bad[i]) sum += diff[i][k];
    }
    const double mean = sum / m;
    double ss = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
      if (!bad[i]) ss += (diff[i][k] - mean) * (diff[i][k] - mean);
    }
    est.r[k] = mean;
    est.stderr_r[k] = std::sqrt(ss / (m - 1.0) / m);
  }
  return est;
}

}  // namespace qcle
