#pragma once

#include "ifm/analytic.hpp"

// Zero-frequency shot noise of the current at the lower-right port of the
// chain, S(0) = (e^2/pi) |S_LL|^2 |S_LU|^2 e|V| with S = (BA)^N. The primary
// output is the dimensionless Snorm(0) = pi S(0)/(e^3 |V|) = |S_LL|^2 |S_LU|^2;
// the SI variant restores a 1/hbar factor per the standard scattering-theory
// normalization. Temperature is fixed at T = 0.

namespace ifm {

struct NoiseResult {
  double s_ll_sq = 0.0;    // |S_LL|^2
  double s_lu_sq = 0.0;    // |S_LU|^2
  double normalized = 0.0; // Snorm(0) = |S_LL|^2 |S_LU|^2, in [0, 1/4]
};

inline NoiseResult normalized_noise(const InterferometerSpec& spec) {
  const TransferMatrix s = chain_transfer(spec);
  const double ll = s.ll * s.ll;
  const double lu = s.lu * s.lu;
  return {ll, lu, ll * lu};
}

// S(0) in A^2/Hz: (e^3 |V| / (pi hbar)) * Snorm(0). Exactly linear in |V|.
inline double dimensionful_noise(const InterferometerSpec& spec, double bias_volts) {
  if (!(bias_volts > 0.0))
    throw std::invalid_argument("bias must be positive");
  const double e = constants::elementary_charge;
  const double prefactor = e * e * e * bias_volts / (constants::pi * constants::hbar);
  return prefactor * normalized_noise(spec).normalized;
}

// Midpoint-rule integral of the T=0 occupation window f_L(eps)[1 - f_U(eps)]
// over eps in eV: the indicator of 0 < eps < e|V|, whose exact integral is
// |V|. Validates the one numerically checkable step of the noise derivation.
inline double energy_window_check(double bias_volts, int grid_points) {
  if (!(bias_volts > 0.0))
    throw std::invalid_argument("bias must be positive");
  if (grid_points < 2)
    throw std::invalid_argument("need at least two grid points");
  const double lo = -0.5 * bias_volts;
  const double hi = 1.5 * bias_volts;
  const double h = (hi - lo) / grid_points;
  double acc = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double eps = lo + (i + 0.5) * h;
    const bool lower_occupied = eps < bias_volts; // f_L at T=0, chemical potential e|V|
    const bool upper_empty = eps > 0.0;           // 1 - f_U at T=0
    if (lower_occupied && upper_empty) acc += h;
  }
  return acc;
}

} // namespace ifm
