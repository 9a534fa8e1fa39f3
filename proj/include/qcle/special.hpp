#pragma once

namespace qcle {

/// Sine integral Si(x) = int_0^x sin(u)/u du.
double sine_integral(double x);

/// int_Omega^inf cos(w t)/w^2 dw  (Omega > 0).
double tail_cos_over_w2(double omega_cut, double t);
/// int_Omega^inf sin(w t)/w^3 dw  (Omega > 0).
double tail_sin_over_w3(double omega_cut, double t);

}  // namespace qcle
