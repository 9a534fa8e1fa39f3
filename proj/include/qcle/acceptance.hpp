#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// End-to-end checks shared by `qcle validate` and the acceptance test binary.
namespace qcle::acceptance {

struct Settings {
  std::uint64_t seed = 20261015;
  std::size_t mc_paths = 10000;
  /// Temperature of the nonlinear Monte Carlo comparison; the Gaussian moment
  /// closure is only accurate when sigma^2 is small.
  double nonlinear_temp = 0.005;
  std::size_t workers = 0;
};

struct Outcome {
  int id;
  std::string title;
  bool passed;
  std::string detail;
  double seconds;
};

inline constexpr int kCriterionCount = 9;

Outcome run_criterion(int id, const Settings& settings = {});

/// Runs the listed criteria (all when empty) in order.
std::vector<Outcome> run_all(const Settings& settings = {}, std::span<const int> ids = {});

/// "[PASS] 3 route equivalence ... (1.2 s) detail"
std::string format(const Outcome& outcome);

}  // namespace qcle::acceptance
