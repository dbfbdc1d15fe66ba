#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

// Shared domain types for the chained-interferometer model: the interferometer
// spec (N, theta, eta), real 2x2 transfer matrices on the (U, L) mode basis,
// two-amplitude mode states, the tunnelling-tip absorber parameters, and 2DEG
// material parameters. All types are immutable values after construction and
// safe to share across threads.

namespace ifm {

inline constexpr const char* version = "0.1.0";

namespace constants {

// CODATA; exact under the 2019 SI redefinition where applicable.
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double electron_mass = 9.1093837015e-31;    // kg
inline constexpr double pi = 3.14159265358979323846;

inline constexpr double ev_to_joule(double ev) { return ev * elementary_charge; }

} // namespace constants

// One particle split over the upper path a (region U) and lower path b
// (region L). The squared norm can only shrink under absorption.
struct ModeState {
  double amp_u = 0.0;
  double amp_l = 0.0;

  double norm_sq() const { return amp_u * amp_u + amp_l * amp_l; }
};

// Real 2x2 matrix on the (U, L) basis. Row 1 is the U output, row 2 the L
// output; column 1 takes the U input, column 2 the L input.
struct TransferMatrix {
  double uu = 1.0, ul = 0.0;
  double lu = 0.0, ll = 1.0;

  static TransferMatrix identity() { return {}; }

  TransferMatrix operator*(const TransferMatrix& r) const {
    return {uu * r.uu + ul * r.lu, uu * r.ul + ul * r.ll,
            lu * r.uu + ll * r.lu, lu * r.ul + ll * r.ll};
  }

  ModeState apply(const ModeState& s) const {
    return {uu * s.amp_u + ul * s.amp_l, lu * s.amp_u + ll * s.amp_l};
  }

  double determinant() const { return uu * ll - ul * lu; }

  // Closed form for the 2x2 case: sigma1^2 + sigma2^2 = |M|_F^2 and
  // sigma1*sigma2 = |det M|.
  std::pair<double, double> singular_values() const {
    const double f = uu * uu + ul * ul + lu * lu + ll * ll;
    const double d = std::fabs(determinant());
    const double disc = std::sqrt(std::fmax(f * f - 4.0 * d * d, 0.0));
    return {std::sqrt(0.5 * (f + disc)), std::sqrt(std::fmax(0.5 * (f - disc), 0.0))};
  }

  double max_singular_value() const { return singular_values().first; }

  // max-abs deviation of M^T M from the identity
  double orthogonality_defect() const {
    const double a = uu * uu + lu * lu - 1.0;
    const double b = uu * ul + lu * ll;
    const double c = ul * ul + ll * ll - 1.0;
    return std::fmax(std::fabs(a), std::fmax(std::fabs(b), std::fabs(c)));
  }
};

// Chain of n_stages splitters of angle theta with an absorber of transparency
// eta behind each. theta defaults to pi/(2N); a custom angle is allowed so
// unitary chains with non-degenerate output statistics can be built.
struct InterferometerSpec {
  int n_stages = 1;
  double theta = 0.5 * constants::pi;
  double eta = 0.0;
};

inline InterferometerSpec make_interferometer(int n_stages, double eta, double theta) {
  if (n_stages < 1)
    throw std::invalid_argument("interferometer needs at least one stage");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("transparency eta must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= 0.5 * constants::pi))
    throw std::invalid_argument("splitter angle theta must lie in [0, pi/2]");
  return {n_stages, theta, eta};
}

inline InterferometerSpec make_interferometer(int n_stages, double eta) {
  if (n_stages < 1)
    throw std::invalid_argument("interferometer needs at least one stage");
  return make_interferometer(n_stages, eta, 0.5 * constants::pi / n_stages);
}

inline constexpr double default_tunnelling_distance = 6.0e-8; // m
inline constexpr double gaas_effective_mass = 0.067 * constants::electron_mass;

// Tunnelling-tip absorber: effective barrier height delta_w = <Phi> - e|V|/2
// (eV), tunnelling distance s (m), effective carrier mass (kg).
struct AbsorberModel {
  double delta_w_ev = 0.0;
  double distance_m = default_tunnelling_distance;
  double m_eff_kg = gaas_effective_mass;
};

inline AbsorberModel make_absorber(double delta_w_ev,
                                   double distance_m = default_tunnelling_distance,
                                   double m_eff_kg = gaas_effective_mass) {
  if (!(delta_w_ev >= 0.0))
    throw std::invalid_argument("effective barrier <Phi> - e|V|/2 must be non-negative");
  if (!(distance_m > 0.0))
    throw std::invalid_argument("tunnelling distance must be positive");
  if (!(m_eff_kg > 0.0))
    throw std::invalid_argument("effective mass must be positive");
  return {delta_w_ev, distance_m, m_eff_kg};
}

struct MaterialParams {
  double m_eff_kg = gaas_effective_mass;
  double fermi_energy_ev = 0.0;
  double mobility_m2_per_vs = 0.0;
  double work_function_ev = 0.0;
};

inline MaterialParams make_material(double m_eff_kg, double fermi_energy_ev,
                                    double mobility_m2_per_vs, double work_function_ev) {
  if (!(m_eff_kg > 0.0))
    throw std::invalid_argument("effective mass must be positive");
  if (!(fermi_energy_ev >= 0.0))
    throw std::invalid_argument("Fermi energy must be non-negative");
  if (!(mobility_m2_per_vs > 0.0))
    throw std::invalid_argument("mobility must be positive");
  if (!(work_function_ev > 0.0))
    throw std::invalid_argument("work function must be positive");
  return {m_eff_kg, fermi_energy_ev, mobility_m2_per_vs, work_function_ev};
}

// High-mobility GaAs/AlGaAs 2DEG at low temperature.
inline MaterialParams gaas() { return {gaas_effective_mass, 0.014, 1.0e2, 5.0}; }

} // namespace ifm
