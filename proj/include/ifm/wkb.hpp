#pragma once

#include "ifm/model.hpp"

// WKB map from the tip barrier (delta_w, s) to the tunnelling decay constant
// kappa, the current ratio J/J0, and the absorber transparency eta.

namespace ifm {

// kappa = (2/hbar) * sqrt(2 m* dW), dW taken in eV at the API boundary and
// converted once.
inline double decay_constant(const AbsorberModel& absorber) {
  if (!(absorber.delta_w_ev >= 0.0))
    throw std::invalid_argument("effective barrier <Phi> - e|V|/2 must be non-negative");
  const double dw_joule = constants::ev_to_joule(absorber.delta_w_ev);
  return 2.0 / constants::hbar * std::sqrt(2.0 * absorber.m_eff_kg * dw_joule);
}

// J(s)/J0 = exp(-kappa s), in (0, 1].
inline double tunnelling_ratio(const AbsorberModel& absorber) {
  if (!(absorber.distance_m > 0.0))
    throw std::invalid_argument("tunnelling distance must be positive");
  return std::exp(-decay_constant(absorber) * absorber.distance_m);
}

// eta(dW) = 1 - exp(-kappa(dW) s). Defined as the complement of
// tunnelling_ratio so the two share one kappa evaluation.
inline double transparency(const AbsorberModel& absorber) {
  return 1.0 - tunnelling_ratio(absorber);
}

// dW = <Phi> - e|V|/2, everything in eV (e|V| in eV is numerically |V| in
// volts). May be negative; callers validate against the barrier assumption.
inline double barrier_from_bias(double work_function_ev, double bias_volts) {
  return work_function_ev - 0.5 * std::fabs(bias_volts);
}

} // namespace ifm
