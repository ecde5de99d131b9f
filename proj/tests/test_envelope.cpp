#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <random>

#include "pla/design.hpp"
#include "pla/envelope.hpp"
#include "pla/response.hpp"
#include "pla/sequence.hpp"

using namespace pla;

namespace {

std::shared_ptr<const Envelope> shared_env(Envelope e) {
  return std::make_shared<Envelope>(std::move(e));
}

std::vector<double> random_phases(std::mt19937& gen, int n) {
  std::uniform_real_distribution<double> dist(0.0, two_pi);
  std::vector<double> out(n);
  for (double& p : out) p = dist(gen);
  return out;
}

}  // namespace

TEST_CASE("envelope normalization and moments") {
  const double omega = default_rabi;

  const Envelope sq = Envelope::square(omega);
  const double td = sq.duration();
  CHECK(td == Catch::Approx(pi / omega));
  CHECK(sq.moment(0) == Catch::Approx(td));
  CHECK(sq.moment(1) == Catch::Approx(td * td / 2));
  CHECK(sq.value(0.5 * td) == 1.0);
  CHECK(sq.value(-1.0) == 0.0);
  CHECK(sq.value(2 * td) == 0.0);

  const Envelope rc = Envelope::raised_cosine(omega);
  CHECK(omega * rc.moment(0) == Catch::Approx(pi).epsilon(1e-12));
  // midpoint symmetry: I_1 = I_0 t_d / 2
  CHECK(rc.moment(1) ==
        Catch::Approx(rc.moment(0) * rc.duration() / 2).epsilon(1e-12));

  const Envelope tg = Envelope::truncated_gaussian(omega);
  CHECK(omega * tg.moment(0) == Catch::Approx(pi).epsilon(1e-12));
  // brute-force Riemann oracle for I_2
  const int steps = 2'000'000;
  const double h = tg.duration() / steps;
  double riemann = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) * h;
    riemann += tg.value(t) * t * t * h;
  }
  CHECK(tg.moment(2) == Catch::Approx(riemann).epsilon(1e-9));
}

TEST_CASE("custom sampled envelope") {
  const double omega = default_rabi;
  const double td = pi / omega;
  // triangle shape
  const Envelope tri =
      Envelope::custom(omega, td, {{0.0, 0.0}, {0.5 * td, 1.0}, {td, 0.0}});
  CHECK(omega * tri.moment(0) == Catch::Approx(pi).epsilon(1e-12));
  CHECK(tri.value(0.25 * td) == Catch::Approx(tri.value(0.75 * td)));
  // renormalized peak: raw area td/2 scaled to pi/omega
  CHECK(tri.value(0.5 * td) == Catch::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(Envelope::custom(omega, td, {{0.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Envelope::custom(omega, td, {{0.0, 1.0}, {0.1 * td, -0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      Envelope::custom(omega, td, {{0.2 * td, 1.0}, {0.1 * td, 1.0}}),
      std::invalid_argument);
}

TEST_CASE("envelope-corrected moments reduce to the square result") {
  std::mt19937 gen(31);
  const double omega = default_rabi;
  const auto square = shared_env(Envelope::square(omega));
  for (int rep = 0; rep < 10; ++rep) {
    PulseSequence seq("rand", random_phases(gen, 7), omega, square);
    for (int p = 0; p <= 3; ++p) {
      // envelope route (moment integrals) vs binomial route
      const auto tog = toggling_phases(seq);
      const cxd via_env =
          detail::continuous_moment_env_impl(tog, seq.envelope(), omega, p);
      const cxd via_binom = detail::continuous_moment_square_impl(tog, p);
      CHECK(std::abs(via_env - via_binom) <
            1e-12 * std::max(1.0, std::abs(via_binom)));
    }
  }
}

TEST_CASE("criteria membership is envelope independent") {
  const double omega = default_rabi;
  for (auto env : {shared_env(Envelope::raised_cosine(omega)),
                   shared_env(Envelope::truncated_gaussian(omega))}) {
    const PulseSequence f1 = f1_sequence().with_envelope(env);
    CHECK(check_pla(f1, 1).satisfies(1e-12));
    for (int p = 0; p <= 1; ++p) {
      const auto c = continuous_moment(f1, p);
      CHECK(std::hypot(c[0], c[1]) < 1e-10);
    }

    const PulseSequence knill = knill_sequence().with_envelope(env);
    CHECK_FALSE(check_pla(knill, 1).satisfies());
  }
}

TEST_CASE("raised-cosine primitive zeroth moment") {
  const double omega = default_rabi;
  const auto env = shared_env(Envelope::raised_cosine(omega));
  const PulseSequence prim = primitive_sequence().with_envelope(env);
  // Omega c_0 = Omega I_0 / 2 = pi / 2 under area normalization
  const auto c0 = continuous_moment(prim, 0);
  CHECK(c0[0] == Catch::Approx(omega * env->moment(0) / 2).epsilon(1e-12));
  CHECK(c0[0] == Catch::Approx(pi / 2).epsilon(1e-12));
  CHECK(c0[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("DC second order with envelopes") {
  const double omega = default_rabi;
  const double sigma = 1.21e-2 * omega;
  const Envelope rc = Envelope::raised_cosine(omega);

  // normalized envelopes leave the DC second-order value unchanged
  CHECK(dc_second_order_env(pla1_2_sequence(), rc, sigma) ==
        Catch::Approx(dc_second_order(pla1_2_sequence(), sigma))
            .epsilon(1e-10));
  CHECK(dc_second_order_env(f1_sequence(), rc, sigma) <= 1e-12);
  CHECK(dc_second_order_env(f1_sequence(), rc, 0.0) == 0.0);
}

TEST_CASE("filter function with envelopes") {
  const double omega = default_rabi;
  const Envelope sq = Envelope::square(omega);
  const auto f1 = f1_sequence();

  // square override reproduces the default path
  for (double x : {1e-3, 1e-2, 0.5, 2.0}) {
    const double f = x * omega / two_pi;
    CHECK(filter_function_env(f1, sq, f) ==
          Catch::Approx(filter_function(f1, f)).epsilon(1e-8));
  }

  const Envelope rc = Envelope::raised_cosine(omega);
  CHECK(filter_function_env(f1, rc, 0.0) == 0.0);

  // roll-off order is envelope independent
  const auto f1_rc =
      f1.with_envelope(shared_env(Envelope::raised_cosine(omega)));
  CHECK(filter_order(f1_rc).slope == Catch::Approx(6.0).margin(0.1));
}
