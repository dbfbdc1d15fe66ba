#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ifm/shotnoise.hpp"
#include "ifm/wkb.hpp"

// Grid sweeps over (N, eta) and (N, delta_w), plus the two design inverters:
// smallest stage count reaching a target probability, and the largest barrier
// height still reaching it.

namespace ifm {

// Rectangular grid of values over two strictly increasing axes; values are
// row-major with axis1 as the slow index. metadata records the generation
// parameters so the grid can be regenerated.
struct SurfaceGrid {
  std::string axis1_name;
  std::string axis2_name;
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;
  std::vector<double> values;
  std::vector<std::pair<std::string, std::string>> metadata;

  double at(std::size_t i, std::size_t j) const {
    return values[i * axis2_values.size() + j];
  }
};

// Snorm(0) over N in {1..n_max} x eta uniform on [0, 1].
inline SurfaceGrid noise_surface(int n_max, int eta_steps) {
  if (n_max < 1)
    throw std::invalid_argument("n_max must be at least 1");
  if (eta_steps < 2)
    throw std::invalid_argument("need at least two eta steps");
  SurfaceGrid grid;
  grid.axis1_name = "N";
  grid.axis2_name = "eta";
  for (int n = 1; n <= n_max; ++n) grid.axis1_values.push_back(n);
  for (int i = 0; i < eta_steps; ++i)
    grid.axis2_values.push_back(static_cast<double>(i) / (eta_steps - 1));
  grid.values.reserve(static_cast<std::size_t>(n_max) * eta_steps);
  for (int n = 1; n <= n_max; ++n)
    for (double eta : grid.axis2_values)
      grid.values.push_back(normalized_noise(make_interferometer(n, eta)).normalized);
  grid.metadata = {{"value", "normalized_noise"}, {"theta_rule", "pi/(2N)"},
                   {"version", version}};
  return grid;
}

// Success probability over N in {1..n_max} x delta_w uniform on [0, dw_max],
// with eta(delta_w) from the WKB map at tunnelling distance s.
inline SurfaceGrid probability_surface(int n_max, double dw_max_ev, int dw_steps,
                                       double distance_m) {
  if (n_max < 1)
    throw std::invalid_argument("n_max must be at least 1");
  if (!(dw_max_ev > 0.0))
    throw std::invalid_argument("dw_max must be positive");
  if (dw_steps < 2)
    throw std::invalid_argument("need at least two delta_w steps");
  if (!(distance_m > 0.0))
    throw std::invalid_argument("tunnelling distance must be positive");
  SurfaceGrid grid;
  grid.axis1_name = "N";
  grid.axis2_name = "delta_w";
  for (int n = 1; n <= n_max; ++n) grid.axis1_values.push_back(n);
  for (int i = 0; i < dw_steps; ++i)
    grid.axis2_values.push_back(dw_max_ev * i / (dw_steps - 1));
  grid.values.reserve(static_cast<std::size_t>(n_max) * dw_steps);
  for (int n = 1; n <= n_max; ++n)
    for (double dw : grid.axis2_values) {
      const double eta = transparency(make_absorber(dw, distance_m));
      grid.values.push_back(success_probability(make_interferometer(n, eta)));
    }
  grid.metadata = {{"value", "success_probability"}, {"theta_rule", "pi/(2N)"},
                   {"distance_m", std::to_string(distance_m)}, {"version", version}};
  return grid;
}

// Smallest N <= n_cap with success_probability >= p_target. Exhaustive scan;
// monotonicity of P in N at eta > 0 is unproven, so no bisection over N.
inline std::optional<int> min_stages_for_target(double p_target, double eta, int n_cap) {
  if (!(p_target > 0.0 && p_target < 1.0))
    throw std::invalid_argument("target probability must lie in (0, 1)");
  if (n_cap < 1)
    throw std::invalid_argument("stage cap must be at least 1");
  for (int n = 1; n <= n_cap; ++n)
    if (success_probability(make_interferometer(n, eta)) >= p_target) return n;
  return std::nullopt;
}

// Largest delta_w (eV) with P(n_stages, delta_w) >= p_target, to within
// tolerance_ev, by bisection on [0, hi]. P is checked to be monotone
// non-increasing on a grid over the bracket first; a violation throws rather
// than returning a wrong root. Returns nullopt if even delta_w = 0 misses
// the target.
inline std::optional<double> required_dw_for_target(double p_target, int n_stages,
                                                    double distance_m,
                                                    double tolerance_ev) {
  if (!(p_target > 0.0 && p_target < 1.0))
    throw std::invalid_argument("target probability must lie in (0, 1)");
  if (n_stages < 1)
    throw std::invalid_argument("interferometer needs at least one stage");
  if (!(distance_m > 0.0))
    throw std::invalid_argument("tunnelling distance must be positive");
  if (!(tolerance_ev > 0.0))
    throw std::invalid_argument("tolerance must be positive");

  auto prob_at = [&](double dw_ev) {
    const double eta = transparency(make_absorber(dw_ev, distance_m));
    return success_probability(make_interferometer(n_stages, eta));
  };

  if (prob_at(0.0) < p_target) return std::nullopt;

  double hi = 3.0e-4;
  while (prob_at(hi) >= p_target) {
    hi *= 2.0;
    if (hi > 1.0)
      throw std::runtime_error("failed to bracket the target probability below 1 eV");
  }

  const int grid = 257;
  double prev = prob_at(0.0);
  for (int i = 1; i < grid; ++i) {
    const double p = prob_at(hi * i / (grid - 1));
    if (p > prev + 1e-12)
      throw std::runtime_error(
          "success probability is not monotone in delta_w on the bracket; refusing to bisect");
    prev = p;
  }

  double lo = 0.0; // invariant: P(lo) >= p_target > P(hi)
  while (hi - lo > tolerance_ev) {
    const double mid = 0.5 * (lo + hi);
    if (prob_at(mid) >= p_target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

} // namespace ifm
