#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pla/design.hpp"
#include "pla/sequence.hpp"

using namespace pla;

namespace {

std::vector<double> random_phases(std::mt19937& gen, int n) {
  std::uniform_real_distribution<double> dist(0.0, two_pi);
  std::vector<double> out(n);
  for (double& p : out) p = dist(gen);
  return out;
}

}  // namespace

TEST_CASE("toggled moments of the catalog sequences") {
  const auto f1 = toggling_phases(f1_sequence());
  CHECK(std::abs(toggled_moment(f1, 0)) < 1e-12);
  CHECK(std::abs(toggled_moment(f1, 1)) < 1e-12);

  const auto knill = toggling_phases(knill_sequence());
  CHECK(std::abs(toggled_moment(knill, 0)) < 1e-12);
  // first moment is -(1+sqrt3) - i (3+sqrt3), nonzero
  const cxd m1 = toggled_moment(knill, 1);
  CHECK(m1.real() == Catch::Approx(-(1.0 + std::sqrt(3.0))).epsilon(1e-12));
  CHECK(m1.imag() == Catch::Approx(-(3.0 + std::sqrt(3.0))).epsilon(1e-12));

  const auto pla2 = toggling_phases(pla2_1_sequence());
  for (int p = 0; p <= 2; ++p) {
    CHECK(std::abs(toggled_moment(pla2, p)) <= 1e-10);
  }
}

TEST_CASE("check_pla classifies the catalog") {
  CHECK(check_pla(f1_sequence(), 1).satisfies());
  CHECK(check_pla(pla3_1_sequence(), 3).satisfies(1e-10));

  const ConstraintReport knill = check_pla(knill_sequence(), 1);
  CHECK(knill.residuals[0] < 1e-12);
  CHECK(knill.residuals[1] > 1.0);  // fails at p = 1
  CHECK_FALSE(knill.satisfies());
}

TEST_CASE("continuous moments") {
  // primitive pi pulse: Omega c_0 = (pi/2, 0, 0)
  const auto c0 = continuous_moment(primitive_sequence(), 0);
  CHECK(c0[0] == Catch::Approx(pi / 2).epsilon(1e-14));
  CHECK(c0[1] == Catch::Approx(0.0).margin(1e-14));
  CHECK(c0[2] == 0.0);

  // F1 satisfies the order-1 criteria
  for (int p = 0; p <= 1; ++p) {
    const auto c = continuous_moment(f1_sequence(), p);
    CHECK(std::hypot(c[0], c[1]) < 1e-12);
  }

  // time symmetry about the midpoint kills all odd orders for F1
  const auto c3 = continuous_moment_centered(f1_sequence(), 3);
  CHECK(std::hypot(c3[0], c3[1]) < 1e-12);
  const auto c1 = continuous_moment_centered(f1_sequence(), 1);
  CHECK(std::hypot(c1[0], c1[1]) < 1e-12);

  // but the start-origin third moment of F1 is nonzero
  const auto c3_raw = continuous_moment(f1_sequence(), 3);
  CHECK(std::hypot(c3_raw[0], c3_raw[1]) > 1.0);
}

TEST_CASE("continuous and toggled moments are tied by the binomial identity") {
  std::mt19937 gen(23);
  for (int rep = 0; rep < 25; ++rep) {
    PulseSequence seq("rand", random_phases(gen, 9), 1.0);
    const auto tog = toggling_phases(seq);
    for (int p = 0; p <= 4; ++p) {
      cxd expect{0.0, 0.0};
      double qf = 1.0;
      for (int q = 0; q <= p; ++q) {
        if (q > 0) qf *= q;
        double pq = 1.0;
        for (int k = 2; k <= p - q + 1; ++k) pq *= k;
        expect += toggled_moment(tog, q) / (qf * pq);
      }
      expect *= 0.5 * std::pow(pi, p + 1);
      const auto got = continuous_moment(seq, p);
      CHECK(std::abs(got[0] - expect.real()) < 1e-10);
      CHECK(std::abs(got[1] - expect.imag()) < 1e-10);
    }
  }
}

TEST_CASE("toggled moment magnitude is invariant under offset and conjugation") {
  std::mt19937 gen(5);
  const auto phases = random_phases(gen, 7);
  PulseSequence seq("rand", phases, 1.0);
  const auto tog = toggling_phases(seq);
  for (int p = 0; p <= 3; ++p) {
    const double base = std::abs(toggled_moment(tog, p));

    ToggledSequence shifted = tog;
    for (double& x : shifted.phases) x = wrap_pi(x + 1.234);
    CHECK(std::abs(toggled_moment(shifted, p)) == Catch::Approx(base));

    ToggledSequence conj = tog;
    for (double& x : conj.phases) x = wrap_pi(-x);
    CHECK(std::abs(toggled_moment(conj, p)) == Catch::Approx(base));
  }
}

TEST_CASE("closed-form order-1 solutions") {
  for (auto sign : {SolutionSign::plus, SolutionSign::minus}) {
    const auto f1 = closed_form_pla1(Pla1Variant::F1, sign);
    CHECK(check_pla(f1, 1).satisfies(1e-12));
    const auto alt = closed_form_pla1(Pla1Variant::PLA1_2, sign);
    CHECK(check_pla(alt, 1).satisfies(1e-12));
  }

  // the two closed forms are genuinely distinct
  CHECK_FALSE(sequences_equivalent(
      closed_form_pla1(Pla1Variant::F1, SolutionSign::plus),
      closed_form_pla1(Pla1Variant::PLA1_2, SolutionSign::plus)));

  // numeric values of the defining angles; cross-checked against the
  // defining equations cos b + cos d = -1/2 and sin d = -2 sin b
  const double b = std::acos((1.0 - 2.0 * std::sqrt(10.0)) / 6.0);
  const double d = -std::acos((-2.0 + std::sqrt(10.0)) / 3.0);
  CHECK(b == Catch::Approx(2.66253).margin(5e-4));
  CHECK(d == Catch::Approx(-1.1731).margin(5e-4));
  CHECK(std::cos(b) + std::cos(d) == Catch::Approx(-0.5).margin(1e-14));
  CHECK(std::sin(d) == Catch::Approx(-2.0 * std::sin(b)).margin(1e-14));

  // sign pairs mirror each other
  CHECK(sequences_equivalent(
      closed_form_pla1(Pla1Variant::F1, SolutionSign::plus),
      closed_form_pla1(Pla1Variant::F1, SolutionSign::minus)));
}

TEST_CASE("objective values") {
  CHECK(objective(f1_sequence().phases(), 1) < 1e-20);

  const std::vector<double> zeros(5, 0.0);
  CHECK(objective(zeros, 0) == Catch::Approx(1.0));

  CHECK(objective(knill_sequence().phases(), 1) > 1e-3);
}

TEST_CASE("solver recovers the known order-1 families") {
  SolverConfig cfg;
  cfg.n = 1;
  cfg.pulses = 5;
  cfg.restarts = 8;
  cfg.seed = 42;
  const auto found = solve_pla(cfg);
  REQUIRE(found.has_value());
  CHECK(check_pla(*found, 1).satisfies(1e-9));

  const bool is_f1 = sequences_equivalent(
      *found, closed_form_pla1(Pla1Variant::F1, SolutionSign::plus));
  const bool is_alt = sequences_equivalent(
      *found, closed_form_pla1(Pla1Variant::PLA1_2, SolutionSign::plus));
  CHECK((is_f1 || is_alt));
}

TEST_CASE("solver at order 0 finds three toggling axes 120 degrees apart") {
  SolverConfig cfg;
  cfg.n = 0;
  cfg.pulses = 3;
  cfg.restarts = 4;
  cfg.seed = 1;
  const auto found = solve_pla(cfg);
  REQUIRE(found.has_value());
  const auto tog = toggling_phases(*found);
  // brute check: all pairwise differences are +-2pi/3 mod 2pi
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = i + 1; j < 3; ++j) {
      const double d =
          std::abs(circular_diff(tog.phases[i], tog.phases[j]));
      CHECK(d == Catch::Approx(two_pi / 3).margin(1e-7));
    }
  }
}

TEST_CASE("solver determinism and validation") {
  SolverConfig cfg;
  cfg.n = 1;
  cfg.pulses = 5;
  cfg.restarts = 3;
  cfg.seed = 9;
  const auto a = solve_pla(cfg);
  const auto b = solve_pla(cfg);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  for (size_t i = 0; i < a->size(); ++i) {
    CHECK(a->phases()[i] == b->phases()[i]);  // bit-identical
  }

  SolverConfig bad = cfg;
  bad.pulses = 4;
  CHECK_THROWS_AS(solve_pla(bad), std::invalid_argument);
  bad.pulses = 1;
  CHECK_THROWS_AS(solve_pla(bad), std::invalid_argument);
}
