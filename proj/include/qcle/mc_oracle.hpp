#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qcle/grid.hpp"
#include "qcle/noise_model.hpp"
#include "qcle/params.hpp"

namespace qcle {

/// Gaussian noise paths drawn lazily from (seed, path index). Paths 2p and
/// 2p + 1 are the real and imaginary parts of one circulant synthesis.
class NoiseEnsemble {
 public:
  NoiseEnsemble(DiscreteNoise noise, std::size_t n_paths, std::uint64_t seed);

  const DiscreteNoise& noise() const { return noise_; }
  const TimeGrid& grid() const { return noise_.grid; }
  std::size_t n_paths() const { return n_paths_; }
  std::uint64_t seed() const { return seed_; }

  /// Noise path i on the grid.
  std::vector<double> path(std::size_t i) const;

  /// Draws both paths of pair p. `extra` receives further standard normals
  /// from the same stream (used for random initial velocities).
  void draw_pair(std::size_t p, std::vector<double>& a, std::vector<double>& b,
                 std::vector<double>* extra = nullptr) const;

 private:
  DiscreteNoise noise_;
  std::size_t n_paths_;
  std::uint64_t seed_;
};

NoiseEnsemble sample_noise(const TimeGrid& grid, const BathParams& bath, std::size_t n_paths,
                           std::uint64_t seed);

/// Ensemble with the noise switched off.
NoiseEnsemble zero_noise(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed = 0);

struct McOptions {
  std::size_t workers = 0;        ///< 0: hardware concurrency
  std::size_t stride = 1;         ///< keep every stride-th node
  double overflow_guard = 1e6;    ///< |q| beyond this excludes the path
  bool thermal_v0 = false;        ///< v0 += N(0, temp) per path
  double temp = 0.0;              ///< used with thermal_v0
};

struct Ensemble {
  TimeGrid grid;
  std::size_t n_paths;
  std::uint64_t seed;
  std::vector<std::vector<double>> trajectories;
  std::vector<bool> excluded;
  std::size_t n_excluded;
};

/// q'' = -gamma q' - eta q - alpha q^3 - eps + xi(t), RK4 with the noise held
/// over each step.
Ensemble integrate_qcle(const NoiseEnsemble& noise, const PotentialParams& potential, double gamma,
                        double q0, double v0, const McOptions& opts = {});

struct MomentEstimate {
  SampledSignal mean;
  SampledSignal variance;
  SampledSignal stderr_mean;
  SampledSignal stderr_variance;
  std::size_t n_used;
};

MomentEstimate estimate_moments(const Ensemble& ensemble);

struct ResponseEstimate {
  SampledSignal r;
  SampledSignal stderr_r;
  std::size_t n_used;
};

/// [<q>_kicked - <q>_unkicked] / f0_kick with v0 -> v0 + f0_kick and common noise.
ResponseEstimate estimate_response(const PotentialParams& potential, const BathParams& bath,
                                   const TimeGrid& grid, double f0_kick, std::size_t n_paths,
                                   std::uint64_t seed, const McOptions& opts = {});

}  // namespace qcle
