#pragma once

#include <algorithm>

#include "ifm/model.hpp"

// Exact transfer-matrix propagation through the splitter/absorber chain:
// splitter matrix B, absorber matrix A, the chain product S = (BA)^N, the
// detection probability at the lower-right port, and the single-Mach-Zehnder
// Elitzur-Vaidman baseline.

namespace ifm {

struct PortProbabilities {
  double exit_a = 0.0;   // upper-right port of path a
  double exit_b = 0.0;   // lower-right port of path b
  double absorbed = 0.0;
};

// B = [[cos t, sin t], [-sin t, cos t]]; transmissivity sin^2 t,
// reflectivity cos^2 t.
inline TransferMatrix beam_splitter_matrix(double theta) {
  if (!(theta >= 0.0 && theta <= 0.5 * constants::pi))
    throw std::invalid_argument("splitter angle theta must lie in [0, pi/2]");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, s, -s, c};
}

// A = diag(sqrt(eta), 1): the object passes the U amplitude with probability
// eta and never touches the L amplitude.
inline TransferMatrix absorber_matrix(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("transparency eta must lie in [0, 1]");
  return {std::sqrt(eta), 0.0, 0.0, 1.0};
}

// S = (BA)^N by repeated multiplication. Power-by-squaring or
// eigendecomposition buy nothing at N <= a few hundred and the non-normal BA
// has complex eigenvalues; sequential products keep results bit-stable.
inline TransferMatrix chain_transfer(const InterferometerSpec& spec) {
  const TransferMatrix ba = beam_splitter_matrix(spec.theta) * absorber_matrix(spec.eta);
  TransferMatrix s = TransferMatrix::identity();
  for (int k = 0; k < spec.n_stages; ++k) s = ba * s;
  return s;
}

// Probability that a particle injected at the lower-left port exits at the
// lower-right port: the squared L amplitude after B, then (A, B) repeated
// N-1 times. Equals the squared (L,L) entry of chain_transfer, and reduces
// to cos^(2N) theta for a perfect absorber.
inline double success_probability(const InterferometerSpec& spec) {
  const TransferMatrix b = beam_splitter_matrix(spec.theta);
  const TransferMatrix a = absorber_matrix(spec.eta);
  ModeState psi = b.apply({0.0, 1.0});
  for (int k = 1; k < spec.n_stages; ++k) psi = b.apply(a.apply(psi));
  return psi.amp_l * psi.amp_l;
}

// State after the k-th splitter with no object present: (sin kt, cos kt).
inline ModeState no_object_state(int n_passed, double theta) {
  if (n_passed < 0)
    throw std::invalid_argument("splitter count must be non-negative");
  return {std::sin(n_passed * theta), std::cos(n_passed * theta)};
}

// Exit statistics for lower-left injection. The object sits behind every
// splitter, so the U amplitude passes one more absorber after the last
// splitter before detection; the L amplitude never meets it. Hence
// exit_a = eta * S_UL^2 and exit_b = S_LL^2 with S = (BA)^N.
inline PortProbabilities port_probabilities(const InterferometerSpec& spec) {
  const TransferMatrix s = chain_transfer(spec);
  const double pa = std::min(spec.eta * s.ul * s.ul, 1.0);
  const double pb = std::min(s.ll * s.ll, 1.0);
  return {pa, pb, std::fmax(1.0 - pa - pb, 0.0)};
}

// Single Mach-Zehnder interrogation with the object in the transmitted arm
// and splitter reflectivity R: the particle survives the first splitter with
// probability R, then splits over the dark port (detection, exit_b) and the
// bright port (inconclusive, exit_a).
inline PortProbabilities ev_single_shot(double reflectivity) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::invalid_argument("reflectivity must lie in [0, 1]");
  const double r = reflectivity;
  return {r * r, r * (1.0 - r), 1.0 - r};
}

// Total dark-port detection probability when inconclusive outcomes are
// retried: the geometric series R(1-R) * sum_k R^(2k) = R/(1+R). Continuous
// at R=1, where it takes the limit value 1/2.
inline double ev_repeated(double reflectivity) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::invalid_argument("reflectivity must lie in [0, 1]");
  return reflectivity / (1.0 + reflectivity);
}

} // namespace ifm
