#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ifm/analytic.hpp"

using namespace ifm;

namespace {

// independent oracle: the full chain as an explicit matrix product
TransferMatrix chain_by_products(int n, double eta, double theta) {
  const TransferMatrix b = beam_splitter_matrix(theta);
  const TransferMatrix a = absorber_matrix(eta);
  TransferMatrix s = TransferMatrix::identity();
  for (int k = 0; k < n; ++k) s = (b * a) * s;
  return s;
}

} // namespace

TEST_CASE("beam splitter matrix limits") {
  const TransferMatrix id = beam_splitter_matrix(0.0);
  CHECK(id.uu == 1.0);
  CHECK(id.ul == 0.0);
  CHECK(id.lu == 0.0);
  CHECK(id.ll == 1.0);

  const TransferMatrix full = beam_splitter_matrix(constants::pi / 2.0);
  CHECK(full.uu == Catch::Approx(0.0).margin(1e-15));
  CHECK(full.ul == 1.0);
  CHECK(full.lu == -1.0);
  CHECK(full.ll == Catch::Approx(0.0).margin(1e-15));

  const TransferMatrix half = beam_splitter_matrix(constants::pi / 4.0);
  const double root_half = std::sqrt(0.5);
  CHECK(half.uu == Catch::Approx(root_half).epsilon(1e-15));
  CHECK(half.ul == Catch::Approx(root_half).epsilon(1e-15));
  CHECK(half.lu == Catch::Approx(-root_half).epsilon(1e-15));
  // transmissivity sin^2 and reflectivity cos^2 are both 1/2
  CHECK(half.ul * half.ul == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(half.ll * half.ll == Catch::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(beam_splitter_matrix(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(beam_splitter_matrix(1.7), std::invalid_argument);
}

TEST_CASE("beam splitter matrices are orthogonal for random angles") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> angle(0.0, constants::pi / 2.0);
  for (int i = 0; i < 1000; ++i) {
    const TransferMatrix b = beam_splitter_matrix(angle(gen));
    CHECK(b.orthogonality_defect() <= 1e-12);
  }
}

TEST_CASE("absorber matrix") {
  const TransferMatrix transparent = absorber_matrix(1.0);
  CHECK(transparent.uu == 1.0);
  CHECK(transparent.ll == 1.0);

  const TransferMatrix opaque = absorber_matrix(0.0);
  CHECK(opaque.uu == 0.0);
  CHECK(opaque.ll == 1.0);

  const TransferMatrix quarter = absorber_matrix(0.25);
  CHECK(quarter.uu == 0.5);
  CHECK(quarter.ul == 0.0);
  CHECK(quarter.lu == 0.0);
  CHECK(quarter.ll == 1.0);

  CHECK_THROWS_AS(absorber_matrix(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(absorber_matrix(1.01), std::invalid_argument);
}

TEST_CASE("transparent chain composes to a rotation by pi/2") {
  for (int n : {1, 2, 5, 17, 100}) {
    const TransferMatrix s = chain_transfer(make_interferometer(n, 1.0));
    CHECK(s.uu == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.ul == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(s.lu == Catch::Approx(-1.0).epsilon(1e-12));
    CHECK(s.ll == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("opaque two-stage chain matches the hand product") {
  // (BA)^2 at theta = pi/4, eta = 0: BA = [[0, s], [0, c]], so
  // (BA)^2 = [[0, s c], [0, c^2]] = [[0, 0.5], [0, 0.5]]
  const TransferMatrix s = chain_transfer(make_interferometer(2, 0.0));
  CHECK(s.uu == 0.0);
  CHECK(s.lu == 0.0);
  CHECK(s.ul == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(s.ll == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("single-stage chain is exactly B*A") {
  for (double eta : {0.0, 0.3, 0.777, 1.0}) {
    const InterferometerSpec spec = make_interferometer(1, eta);
    const TransferMatrix s = chain_transfer(spec);
    const TransferMatrix ba =
        beam_splitter_matrix(spec.theta) * absorber_matrix(spec.eta);
    CHECK(s.uu == ba.uu);
    CHECK(s.ul == ba.ul);
    CHECK(s.lu == ba.lu);
    CHECK(s.ll == ba.ll);
  }
}

TEST_CASE("unitary chains stay orthogonal at any angle") {
  std::mt19937 gen(19);
  std::uniform_real_distribution<double> angle(0.0, constants::pi / 2.0);
  std::uniform_int_distribution<int> stages(1, 120);
  for (int i = 0; i < 200; ++i) {
    const TransferMatrix s =
        chain_transfer(make_interferometer(stages(gen), 1.0, angle(gen)));
    CHECK(s.orthogonality_defect() <= 1e-12);
  }
}

TEST_CASE("chain transfer never amplifies") {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> stages(1, 120);
  for (int i = 0; i < 300; ++i) {
    const TransferMatrix s = chain_transfer(make_interferometer(stages(gen), unit(gen)));
    CHECK(s.max_singular_value() <= 1.0 + 1e-12);
  }
}

TEST_CASE("success probability on pinned cases") {
  // eta = 0 closed form: cos^(2N)(pi/(2N))
  CHECK(success_probability(make_interferometer(2, 0.0)) ==
        Catch::Approx(0.25).epsilon(1e-12));
  CHECK(success_probability(make_interferometer(10, 0.0)) ==
        Catch::Approx(0.78056).margin(1e-4));
  // transparent chain: the L amplitude is cos(N * pi/(2N)) = 0
  for (int n : {1, 3, 40}) {
    CHECK(success_probability(make_interferometer(n, 1.0)) ==
          Catch::Approx(0.0).margin(1e-12));
  }
  // two stages at theta = pi/4: closed form (1 - sqrt(eta))^2 / 4;
  // eta = 0.89465 is the WKB value at delta_w = 2e-4 eV, s = 6e-8 m
  const double eta = 0.89465;
  const double closed = (1.0 - std::sqrt(eta)) * (1.0 - std::sqrt(eta)) / 4.0;
  CHECK(success_probability(make_interferometer(2, eta)) ==
        Catch::Approx(closed).epsilon(1e-12));
  CHECK(success_probability(make_interferometer(2, eta)) ==
        Catch::Approx(7.33e-4).epsilon(0.01));
}

TEST_CASE("success probability equals the closed form for opaque chains") {
  for (int n = 1; n <= 200; ++n) {
    const double closed = std::pow(std::cos(constants::pi / (2.0 * n)), 2.0 * n);
    CHECK(success_probability(make_interferometer(n, 0.0)) ==
          Catch::Approx(closed).margin(1e-12));
  }
}

TEST_CASE("opaque-chain success probability rises toward one") {
  double prev = success_probability(make_interferometer(2, 0.0));
  for (int n = 3; n <= 200; ++n) {
    const double p = success_probability(make_interferometer(n, 0.0));
    CHECK(p > prev);
    prev = p;
  }
  // large-N expansion: P = 1 - pi^2/(4N) + O(1/N^2)
  for (int n = 50; n <= 200; n += 10) {
    const double p = success_probability(make_interferometer(n, 0.0));
    CHECK(p > 1.0 - constants::pi * constants::pi / (4.0 * n) - 0.01);
  }
}

TEST_CASE("success probability equals the squared (L,L) chain entry") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> stages(1, 80);
  for (int i = 0; i < 200; ++i) {
    const InterferometerSpec spec = make_interferometer(stages(gen), unit(gen));
    const double ll = chain_transfer(spec).ll;
    CHECK(success_probability(spec) == Catch::Approx(ll * ll).margin(1e-12));
  }
}

TEST_CASE("no-object state follows (sin kt, cos kt)") {
  const ModeState input = no_object_state(0, 0.4);
  CHECK(input.amp_u == 0.0);
  CHECK(input.amp_l == 1.0);

  // after all N splitters at the default angle the particle sits on path a
  const ModeState end = no_object_state(8, constants::pi / 16.0);
  CHECK(end.amp_u == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(end.amp_l == Catch::Approx(0.0).margin(1e-15));

  const ModeState one = no_object_state(1, constants::pi / 4.0);
  CHECK(one.amp_u == Catch::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(one.amp_l == Catch::Approx(std::sqrt(0.5)).epsilon(1e-15));

  CHECK_THROWS_AS(no_object_state(-1, 0.4), std::invalid_argument);
}

TEST_CASE("port probabilities on pinned cases") {
  // transparent chain: everything exits on path a
  const PortProbabilities open = port_probabilities(make_interferometer(6, 1.0));
  CHECK(open.exit_a == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(open.exit_b == Catch::Approx(0.0).margin(1e-12));
  CHECK(open.absorbed == Catch::Approx(0.0).margin(1e-12));

  // opaque two-stage chain: the surviving a-amplitude meets the object after
  // the last splitter, so nothing exits on a
  const PortProbabilities closed = port_probabilities(make_interferometer(2, 0.0));
  CHECK(closed.exit_a == 0.0);
  CHECK(closed.exit_b == Catch::Approx(0.25).epsilon(1e-12));
  CHECK(closed.absorbed == Catch::Approx(0.75).epsilon(1e-12));

  // Zeno regime: detection probability approaches one
  const PortProbabilities zeno = port_probabilities(make_interferometer(400, 0.0));
  CHECK(zeno.exit_b > 0.99);
}

TEST_CASE("port probabilities conserve the particle") {
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> stages(1, 100);
  for (int i = 0; i < 300; ++i) {
    const PortProbabilities p = port_probabilities(make_interferometer(stages(gen), unit(gen)));
    CHECK(p.exit_a >= 0.0);
    CHECK(p.exit_a <= 1.0);
    CHECK(p.exit_b >= 0.0);
    CHECK(p.exit_b <= 1.0);
    CHECK(p.absorbed >= 0.0);
    CHECK(p.absorbed <= 1.0);
    CHECK(p.exit_a + p.exit_b + p.absorbed == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("port probabilities agree with the explicit product oracle") {
  std::mt19937 gen(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> stages(1, 60);
  for (int i = 0; i < 100; ++i) {
    const InterferometerSpec spec = make_interferometer(stages(gen), unit(gen));
    const TransferMatrix s = chain_by_products(spec.n_stages, spec.eta, spec.theta);
    const PortProbabilities p = port_probabilities(spec);
    CHECK(p.exit_a == Catch::Approx(spec.eta * s.ul * s.ul).margin(1e-12));
    CHECK(p.exit_b == Catch::Approx(s.ll * s.ll).margin(1e-12));
  }
}

TEST_CASE("single-shot interrogation baseline") {
  const PortProbabilities half = ev_single_shot(0.5);
  CHECK(half.exit_b == 0.25);   // dark port: detection
  CHECK(half.exit_a == 0.25);   // bright port: inconclusive
  CHECK(half.absorbed == 0.5);
  CHECK(half.exit_a + half.exit_b + half.absorbed == 1.0);

  const PortProbabilities mirror = ev_single_shot(1.0);
  CHECK(mirror.exit_b == 0.0);
  CHECK(mirror.exit_a == 1.0);
  CHECK(mirror.absorbed == 0.0);

  const PortProbabilities biased = ev_single_shot(0.9);
  CHECK(biased.exit_b == Catch::Approx(0.09).epsilon(1e-12));
  CHECK(biased.exit_a == Catch::Approx(0.81).epsilon(1e-12));
  CHECK(biased.absorbed == Catch::Approx(0.10).epsilon(1e-12));

  CHECK_THROWS_AS(ev_single_shot(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(ev_single_shot(1.1), std::invalid_argument);
}

TEST_CASE("repeated interrogation sums the geometric series") {
  CHECK(ev_repeated(0.5) == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(ev_repeated(0.0) == 0.0);
  CHECK(ev_repeated(0.999) == Catch::Approx(0.5).margin(5e-4));
  CHECK(ev_repeated(1.0) == 0.5);

  // consistency with the per-round probabilities: total = dark / (1 - bright)
  std::mt19937 gen(47);
  std::uniform_real_distribution<double> unit(0.0, 0.999);
  for (int i = 0; i < 200; ++i) {
    const double r = unit(gen);
    const PortProbabilities p = ev_single_shot(r);
    CHECK(ev_repeated(r) == Catch::Approx(p.exit_b / (1.0 - p.exit_a)).margin(1e-12));
  }
}
