#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pla/noise.hpp"
#include "pla/sequence.hpp"
#include "pla/unitary.hpp"

namespace pla {

/// Time-domain propagation of the driven qubit under one noise trajectory.
///
/// Each step applies the exact rotation generated by the Hamiltonian sampled
/// at the step midpoint. Within a pulse the rotation axis is fixed, so the
/// per-step rotations commute and their product is accumulated as a single
/// rotation per pulse; unitarity is preserved by construction.
inline Unitary2 propagate(const PulseSequence& seq,
                          const NoiseRealization& noise, int steps_per_pulse) {
  if (steps_per_pulse < 16) {
    throw std::invalid_argument("propagate: steps_per_pulse must be >= 16");
  }
  const Envelope& env = seq.envelope();
  const double t_d = env.duration();
  const double dt = t_d / steps_per_pulse;
  const double omega = seq.rabi();

  std::vector<double> shape(steps_per_pulse);
  for (int j = 0; j < steps_per_pulse; ++j) {
    shape[j] = env.value((j + 0.5) * dt);
  }

  Unitary2 u = Unitary2::identity();
  std::vector<double> beta;
  for (size_t l = 0; l < seq.size(); ++l) {
    noise.sample_midpoints(l * t_d, dt, steps_per_pulse, beta);
    double angle = 0.0;
    for (int j = 0; j < steps_per_pulse; ++j) {
      angle += shape[j] * (omega + beta[j]) * dt;
    }
    u = Unitary2::equatorial_rotation(seq.phases()[l], angle) * u;
  }
  return u;
}

/// Per-frequency Monte Carlo statistics of the gate infidelity.
struct ScanResult {
  struct Row {
    double f_center;       // Hz
    double mean;           // ensemble-average infidelity
    double standard_error; // sample std / sqrt(trials)
    int trials;
  };
  std::vector<Row> rows;
};

namespace detail {

inline double compensated_sum(const std::vector<double>& v) {
  double sum = 0.0, comp = 0.0;
  for (double x : v) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace detail

/// Scans the noise band center across `centers`, averaging the infidelity
/// over `trials` draws per point. Trials are independent; with threads > 1
/// they are partitioned by index and the reduction order stays fixed, so
/// results are identical for any thread count.
inline ScanResult mc_scan(const PulseSequence& seq, const NoiseModel& base,
                          const std::vector<double>& centers, int trials,
                          int steps_per_pulse, int threads = 1) {
  if (trials < 1) throw std::invalid_argument("mc_scan: trials must be >= 1");
  base.validate();
  const Unitary2 u0 = ideal_unitary(seq);
  ScanResult result;
  result.rows.reserve(centers.size());

  if (base.rms == 0.0) {
    // point-mass ensemble at beta = 0: the mean infidelity is exactly zero
    for (double fc : centers) result.rows.push_back({fc, 0.0, 0.0, trials});
    return result;
  }

  std::vector<double> values(trials);
  for (double fc : centers) {
    const NoiseModel model = base.at_center(fc);
    auto worker = [&](int begin, int end) {
      for (int t = begin; t < end; ++t) {
        const NoiseRealization noise = sample_noise(model, t);
        values[t] = infidelity(u0, propagate(seq, noise, steps_per_pulse));
      }
    };
    const int nthreads = std::max(1, std::min(threads, trials));
    if (nthreads == 1) {
      worker(0, trials);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (trials + nthreads - 1) / nthreads;
      for (int i = 0; i < nthreads; ++i) {
        const int begin = i * chunk;
        const int end = std::min(trials, begin + chunk);
        if (begin < end) pool.emplace_back(worker, begin, end);
      }
      for (auto& th : pool) th.join();
    }
    const double mean = detail::compensated_sum(values) / trials;
    double var = 0.0;
    if (trials > 1) {
      std::vector<double> sq(trials);
      for (int t = 0; t < trials; ++t) {
        const double d = values[t] - mean;
        sq[t] = d * d;
      }
      var = detail::compensated_sum(sq) / (trials - 1);
    }
    result.rows.push_back(
        {fc, mean, std::sqrt(var / trials), trials});
  }
  return result;
}

}  // namespace pla
