#pragma once

namespace qcle {

/// V(q) = eta q^2/2 + alpha q^4/4 + epsilon q, probed by an impulse f0 delta(t).
struct PotentialParams {
  double eta = 1.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  double f0 = 1.0;

  /// Throws DomainError if alpha < 0, f0 == 0, or alpha == 0 with eta <= 0.
  void validate() const;

  static PotentialParams parabolic();
  // eta = +1 as listed for the bistable case; pass eta = -1 for a true double well.
  static PotentialParams bistable(double alpha);
  static PotentialParams asymmetric_bistable(double alpha, double epsilon);
};

/// Ohmic bath in scaled units: friction, temperature, reduced Matsubara frequency.
struct BathParams {
  double gamma = 1.0;
  double temp = 1.0;
  double nu = 1.0e4;

  void validate() const;
};

struct ScaledBath {
  double gamma;
  double temp;
};

/// Scale time by sqrt(M/kappa), energy by kappa q_m^2. `friction_rate` is the
/// physical damping rate (1/s).
ScaledBath nondimensionalize(double mass, double stiffness, double length_scale,
                             double temperature_kelvin, double friction_rate);

/// Boltzmann constant in J/K.
inline constexpr double kBoltzmann = 1.380649e-23;

}  // namespace qcle
