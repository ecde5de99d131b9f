#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "pla/noise.hpp"
#include "pla/response.hpp"
#include "pla/sequence.hpp"
#include "pla/simulate.hpp"

using namespace pla;

namespace {

// literal step-by-step reference propagator (no per-pulse collapsing)
Unitary2 propagate_stepwise(const PulseSequence& seq,
                            const NoiseRealization& noise, int steps) {
  const Envelope& env = seq.envelope();
  const double dt = env.duration() / steps;
  Unitary2 u = Unitary2::identity();
  for (size_t l = 0; l < seq.size(); ++l) {
    const double t0 = l * env.duration();
    for (int j = 0; j < steps; ++j) {
      const double tm = t0 + (j + 0.5) * dt;
      const double angle =
          env.value(tm - t0) * (seq.rabi() + noise.eval(tm)) * dt;
      u = Unitary2::equatorial_rotation(seq.phases()[l], angle) * u;
    }
  }
  return u;
}

NoiseModel reference_model(double rabi, std::uint64_t seed = 0) {
  NoiseModel m;
  m.f_center = 1e-2 * rabi / two_pi;
  m.rms = 1.21e-2 * rabi;
  m.seed = seed;
  return m;
}

}  // namespace

TEST_CASE("noise synthesis basics") {
  NoiseModel m = reference_model(default_rabi);

  SECTION("zero rms yields the zero trajectory") {
    m.rms = 0.0;
    const auto r = sample_noise(m, 0);
    CHECK(r.eval(0.0) == 0.0);
    CHECK(r.eval(1e-5) == 0.0);
  }

  SECTION("deterministic per (seed, trial)") {
    const auto a = sample_noise(m, 3);
    const auto b = sample_noise(m, 3);
    const auto c = sample_noise(m, 4);
    REQUIRE(a.components.size() == b.components.size());
    for (size_t i = 0; i < a.components.size(); ++i) {
      CHECK(a.components[i].amp == b.components[i].amp);
    }
    bool any_diff = false;
    for (size_t i = 0; i < a.components.size(); ++i) {
      any_diff = any_diff || a.components[i].amp != c.components[i].amp;
    }
    CHECK(any_diff);
  }

  SECTION("trajectories are real and Gaussian with the requested rms") {
    const int trials = 10000;
    double sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto r = sample_noise(m, t);
      const double b = r.eval(0.0);
      sq += b * b;
    }
    const double rms = std::sqrt(sq / trials);
    CHECK(rms == Catch::Approx(m.rms).epsilon(0.03));
  }

  SECTION("single bin is one sinusoid with mean-square rms^2") {
    m.bins = 1;
    double sq = 0.0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
      const auto r = sample_noise(m, t);
      REQUIRE(r.components.size() == 1);
      // E[|2 A|^2] / 2 = rms^2
      sq += 2.0 * std::norm(2.0 * r.components[0].amp) / 4.0;
    }
    CHECK(std::sqrt(sq / (2.0 * trials)) * std::sqrt(2.0) ==
          Catch::Approx(m.rms).epsilon(0.03));
  }

  SECTION("midpoint sampling matches pointwise evaluation") {
    const auto r = sample_noise(m, 11);
    std::vector<double> grid;
    const double dt = 1e-7;
    r.sample_midpoints(3e-6, dt, 64, grid);
    for (int j = 0; j < 64; ++j) {
      CHECK(grid[j] == Catch::Approx(r.eval(3e-6 + (j + 0.5) * dt))
                           .margin(1e-9 * m.rms));
    }
  }

  SECTION("validation") {
    m.rms = -1.0;
    CHECK_THROWS_AS(sample_noise(m, 0), std::invalid_argument);
    m.rms = 1.0;
    m.bins = 0;
    CHECK_THROWS_AS(sample_noise(m, 0), std::invalid_argument);
  }
}

TEST_CASE("propagation basics") {
  const auto f1 = f1_sequence();

  SECTION("noiseless propagation reproduces the ideal gate") {
    const auto u = propagate(f1, NoiseRealization{}, 64);
    CHECK(infidelity(ideal_unitary(f1), u) < 1e-12);
    CHECK(u.unitarity_residual() < 1e-12);
  }

  SECTION("primitive with constant error: 1 - F = sin^2(beta tau / 2)") {
    const auto prim = primitive_sequence();
    const Unitary2 u0 = ideal_unitary(prim);
    for (double ratio : {1e-3, 1e-2, 0.1}) {
      const double beta = ratio * prim.rabi();
      const auto u = propagate(prim, NoiseRealization::constant(beta), 64);
      const double expect =
          std::pow(std::sin(beta * prim.duration() / 2.0), 2);
      CHECK(infidelity(u0, u) == Catch::Approx(expect).margin(1e-10));
    }
  }

  SECTION("collapsed per-pulse product equals the literal step product") {
    NoiseModel m = reference_model(f1.rabi(), 5);
    const auto noise = sample_noise(m, 17);
    const auto a = propagate(f1, noise, 32);
    const auto b = propagate_stepwise(f1, noise, 32);
    CHECK(std::abs(a.u00 - b.u00) < 1e-12);
    CHECK(std::abs(a.u01 - b.u01) < 1e-12);
    CHECK(std::abs(a.u10 - b.u10) < 1e-12);
    CHECK(std::abs(a.u11 - b.u11) < 1e-12);
  }

  SECTION("step floor is enforced") {
    CHECK_THROWS_AS(propagate(f1, NoiseRealization{}, 8),
                    std::invalid_argument);
  }

  SECTION("static F1 infidelity falls off as beta^6") {
    const Unitary2 u0 = ideal_unitary(f1);
    const double r0 = 1e-3, r1 = 1e-2;
    const double i0 = infidelity(
        u0, propagate(f1, NoiseRealization::constant(r0 * f1.rabi()), 64));
    const double i1 = infidelity(
        u0, propagate(f1, NoiseRealization::constant(r1 * f1.rabi()), 64));
    const double slope = std::log(i1 / i0) / std::log(r1 / r0);
    CHECK(slope == Catch::Approx(6.0).margin(0.1));
  }

  SECTION("square envelope propagation is exactly the default path") {
    const auto env = std::make_shared<Envelope>(Envelope::square(f1.rabi()));
    const auto with_env = f1.with_envelope(env);
    NoiseModel m = reference_model(f1.rabi(), 2);
    const auto noise = sample_noise(m, 5);
    const auto a = propagate(f1, noise, 32);
    const auto b = propagate(with_env, noise, 32);
    CHECK(a.u00 == b.u00);
    CHECK(a.u01 == b.u01);
    CHECK(a.u10 == b.u10);
    CHECK(a.u11 == b.u11);
  }
}

TEST_CASE("integrator convergence") {
  const auto seq = pla2_1_sequence();
  NoiseModel m = reference_model(seq.rabi(), 7);
  const std::vector<double> centers = {m.f_center};
  const auto coarse = mc_scan(seq, m, centers, 50, 256);
  const auto fine = mc_scan(seq, m, centers, 50, 512);
  CHECK(std::abs(fine.rows[0].mean - coarse.rows[0].mean) <
        0.01 * coarse.rows[0].mean);
}

TEST_CASE("mc_scan statistics") {
  const auto f1 = f1_sequence();
  NoiseModel m = reference_model(f1.rabi(), 21);

  SECTION("zero rms gives zero means") {
    m.rms = 0.0;
    const auto scan = mc_scan(f1, m, {1e3, 1e4}, 20, 64);
    for (const auto& row : scan.rows) {
      CHECK(row.mean == 0.0);
      CHECK(row.standard_error == 0.0);
    }
  }

  SECTION("deterministic and thread-count independent") {
    const std::vector<double> centers = {1e4, 3e4};
    const auto a = mc_scan(f1, m, centers, 60, 64, 1);
    const auto b = mc_scan(f1, m, centers, 60, 64, 3);
    for (size_t i = 0; i < centers.size(); ++i) {
      CHECK(a.rows[i].mean == b.rows[i].mean);  // bit-identical
      CHECK(a.rows[i].standard_error == b.rows[i].standard_error);
    }
  }

  SECTION("mid-band mean sits on the first-order prediction") {
    // fast smoke version of the full acceptance comparison
    const double fc = 3e-2 * f1.rabi() / two_pi;
    m.f_center = fc;
    const auto scan = mc_scan(f1, m, {fc}, 400, 128);
    const double pred = first_order_infidelity(f1, m) +
                        dc_limit_quadrature(f1, m.rms);
    const auto& row = scan.rows[0];
    CHECK(std::abs(row.mean - pred) < 3.0 * row.standard_error +
                                          0.05 * pred);
  }
}
