#pragma once

#include "ifm/model.hpp"

// 2DEG transport quantities derived from material parameters.

namespace ifm {

// tau = mu m* / e
inline double relaxation_time(const MaterialParams& m) {
  return m.mobility_m2_per_vs * m.m_eff_kg / constants::elementary_charge;
}

// v_F = sqrt(2 E_F / m*)
inline double fermi_velocity(const MaterialParams& m) {
  return std::sqrt(2.0 * constants::ev_to_joule(m.fermi_energy_ev) / m.m_eff_kg);
}

// l = v_F tau
inline double mean_free_path(const MaterialParams& m) {
  return fermi_velocity(m) * relaxation_time(m);
}

// k_F = sqrt(2 m* E_F) / hbar
inline double fermi_wavenumber(const MaterialParams& m) {
  return std::sqrt(2.0 * m.m_eff_kg * constants::ev_to_joule(m.fermi_energy_ev)) /
         constants::hbar;
}

// One electron per emission period: I = e / tau_c.
inline double emitter_current(double emission_period_s) {
  if (!(emission_period_s > 0.0))
    throw std::invalid_argument("emission period must be positive");
  return constants::elementary_charge / emission_period_s;
}

} // namespace ifm
