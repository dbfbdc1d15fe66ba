#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "ifm/analytic.hpp"

// Seeded Monte Carlo quantum-trajectory engine. The lossy absorber is
// unravelled into two Kraus branches, diag(sqrt(eta), 1) on survival and
// diag(sqrt(1-eta), 0) on capture, which reproduces the non-selective chain
// in expectation. Every trajectory draws from its own counter-derived
// substream, so estimates are bit-identical for any thread count.

namespace ifm {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(master_seed ^ mix64(index + 0x9e3779b97f4a7c15ull));
}

// splitmix64 stream; operator() yields uniforms on the 2^-53 grid of [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double operator()() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

template <class R>
concept UniformSource = requires(R r) {
  { r() } -> std::convertible_to<double>;
};

enum class TrajectoryExit { exit_a, exit_b, absorbed };

struct TrajectoryOutcome {
  TrajectoryExit exit = TrajectoryExit::exit_b;
  std::optional<int> absorbed_at_stage; // 1-based, set iff exit == absorbed
};

// One particle through the chain: splitter, then capture sampled with
// probability (1-eta) * amp_u^2 / |psi|^2, then the survival branch and
// renormalization; the object sits behind every splitter. Final detection
// samples the exit port from the squared amplitudes. The ExitB marginal
// equals success_probability(spec) in expectation.
template <UniformSource R>
TrajectoryOutcome run_trajectory(const InterferometerSpec& spec, R&& draw) {
  const double c = std::cos(spec.theta);
  const double s = std::sin(spec.theta);
  const double sqrt_eta = std::sqrt(spec.eta);
  double u = 0.0;
  double l = 1.0; // injected at the lower-left port
  for (int stage = 1; stage <= spec.n_stages; ++stage) {
    const double bu = c * u + s * l;
    const double bl = -s * u + c * l;
    u = bu;
    l = bl;
    const double p_capture = (1.0 - spec.eta) * u * u / (u * u + l * l);
    if (draw() < p_capture) return {TrajectoryExit::absorbed, stage};
    u *= sqrt_eta;
    const double norm = std::sqrt(u * u + l * l);
    u /= norm;
    l /= norm;
  }
  const double p_a = u * u / (u * u + l * l);
  if (draw() < p_a) return {TrajectoryExit::exit_a, std::nullopt};
  return {TrajectoryExit::exit_b, std::nullopt};
}

struct McEstimate {
  double p_exit_a = 0.0;
  double p_exit_b = 0.0;
  double p_absorbed = 0.0;
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  double stderr_absorbed = 0.0;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
  std::uint64_t count_absorbed = 0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Aggregates run_trajectory outcomes over independent substreams. n_threads
// = 0 picks the hardware default; the result does not depend on it.
inline McEstimate estimate_probabilities(const InterferometerSpec& spec,
                                         std::uint64_t n_samples, std::uint64_t seed,
                                         unsigned n_threads = 0) {
  if (n_samples == 0)
    throw std::invalid_argument("need at least one sample");
  if (n_threads == 0) {
    n_threads = std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
  }
  if (n_threads > n_samples) n_threads = static_cast<unsigned>(n_samples);

  std::vector<std::array<std::uint64_t, 3>> counts(n_threads, {0, 0, 0});
  auto worker = [&](unsigned t) {
    const std::uint64_t begin = n_samples * t / n_threads;
    const std::uint64_t end = n_samples * (t + 1) / n_threads;
    std::array<std::uint64_t, 3> local{0, 0, 0};
    for (std::uint64_t i = begin; i < end; ++i) {
      SplitMix64 stream(substream_seed(seed, i));
      const TrajectoryOutcome out = run_trajectory(spec, stream);
      ++local[static_cast<int>(out.exit)];
    }
    counts[t] = local;
  };

  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  std::array<std::uint64_t, 3> total{0, 0, 0};
  for (const auto& c : counts)
    for (int k = 0; k < 3; ++k) total[k] += c[k];

  const double n = static_cast<double>(n_samples);
  auto frac = [n](std::uint64_t k) { return static_cast<double>(k) / n; };
  auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };

  McEstimate est;
  est.p_exit_a = frac(total[0]);
  est.p_exit_b = frac(total[1]);
  est.p_absorbed = frac(total[2]);
  est.stderr_a = se(est.p_exit_a);
  est.stderr_b = se(est.p_exit_b);
  est.stderr_absorbed = se(est.p_absorbed);
  est.count_a = total[0];
  est.count_b = total[1];
  est.count_absorbed = total[2];
  est.n_samples = n_samples;
  est.seed = seed;
  return est;
}

// Partition noise of a single unitary splitter: n electrons each kept in the
// L channel with probability p = cos^2 theta; returns the sample variance of
// the per-electron indicator, which converges to p(1-p) = Snorm(0).
inline double partition_noise_mc(double theta, std::uint64_t n_electrons,
                                 std::uint64_t seed) {
  if (!(theta >= 0.0 && theta <= 0.5 * constants::pi))
    throw std::invalid_argument("splitter angle theta must lie in [0, pi/2]");
  if (n_electrons == 0)
    throw std::invalid_argument("need at least one electron");
  if (n_electrons == 1) return 0.0;
  const double c = std::cos(theta);
  const double p = c * c;
  std::uint64_t kept = 0;
  for (std::uint64_t i = 0; i < n_electrons; ++i) {
    SplitMix64 stream(substream_seed(seed, i));
    if (stream() < p) ++kept;
  }
  const double n = static_cast<double>(n_electrons);
  return static_cast<double>(kept) * static_cast<double>(n_electrons - kept) /
         (n * (n - 1.0));
}

} // namespace ifm
