#include "qcle/params.hpp"

#include <cmath>

#include "qcle/error.hpp"

namespace qcle {

void PotentialParams::validate() const {
  if (!std::isfinite(eta) || !std::isfinite(alpha) || !std::isfinite(epsilon) ||
      !std::isfinite(f0)) {
    throw DomainError("potential parameters must be finite");
  }
  if (alpha < 0.0) throw DomainError("alpha must be >= 0");
  if (f0 == 0.0) throw DomainError("f0 must be nonzero");
  if (alpha == 0.0 && eta <= 0.0) throw DomainError("alpha = 0 requires eta > 0");
}

PotentialParams PotentialParams::parabolic() { return {1.0, 0.0, 0.0, 1.0}; }

PotentialParams PotentialParams::bistable(double alpha) { return {1.0, alpha, 0.0, 1.0}; }

PotentialParams PotentialParams::asymmetric_bistable(double alpha, double epsilon) {
  return {-1.0, alpha, epsilon, 1.0};
}

void BathParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be > 0");
  if (!(temp > 0.0) || !std::isfinite(temp)) throw DomainError("temp must be > 0");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("nu must be > 0");
}

ScaledBath nondimensionalize(double mass, double stiffness, double length_scale,
                             double temperature_kelvin, double friction_rate) {
  if (!(mass > 0.0) || !(stiffness > 0.0) || !(length_scale > 0.0) ||
      !(temperature_kelvin > 0.0) || !(friction_rate > 0.0)) {
    throw DomainError("nondimensionalize: all physical inputs must be positive");
  }
  const double time_scale = std::sqrt(mass / stiffness);
  const double energy_scale = stiffness * length_scale * length_scale;
  return {friction_rate * time_scale, kBoltzmann * temperature_kelvin / energy_scale};
}

}  // namespace qcle
