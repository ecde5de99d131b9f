#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pla/angles.hpp"
#include "pla/rng.hpp"
#include "pla/unitary.hpp"

namespace pla {

/// Band-limited amplitude-noise specification: a flat one-sided power
/// spectral density of total power rms^2 over a band of width f_band
/// centered on f_center, discretized into `bins` Fourier components.
struct NoiseModel {
  double f_center = 0.0;   // Hz
  double f_band = 2.0;     // Hz
  double rms = 0.0;        // rad/s
  int bins = 16;
  std::uint64_t seed = 0;

  void validate() const {
    if (rms < 0.0) throw std::invalid_argument("noise: rms must be >= 0");
    if (!(f_band > 0.0)) throw std::invalid_argument("noise: f_band must be > 0");
    if (bins < 1) throw std::invalid_argument("noise: bins must be >= 1");
  }

  /// Flat PSD amplitude A with A * f_band = rms^2.
  double psd_amplitude() const { return rms * rms / f_band; }

  NoiseModel at_center(double fc) const {
    NoiseModel m = *this;
    m.f_center = fc;
    return m;
  }
};

/// One synthesized noise trajectory: beta(t) = A0 + sum_k [A_k e^(i 2 pi f_k t)
/// + c.c.], which is real by construction.
struct NoiseRealization {
  struct Component {
    double freq;  // Hz, nonnegative
    cxd amp;
  };

  double a0 = 0.0;  // coefficient of the f = 0 bin, when present
  std::vector<Component> components;

  static NoiseRealization constant(double beta) {
    NoiseRealization r;
    r.a0 = beta;
    return r;
  }

  double eval(double t) const {
    double b = a0;
    for (const auto& c : components) {
      const double arg = two_pi * c.freq * t;
      b += 2.0 * (c.amp.real() * std::cos(arg) - c.amp.imag() * std::sin(arg));
    }
    return b;
  }

  /// Evaluates beta at the midpoints of `count` uniform steps starting at
  /// t_start, using one phasor recurrence per component. Appends into `out`.
  void sample_midpoints(double t_start, double dt, int count,
                        std::vector<double>& out) const {
    out.assign(count, a0);
    for (const auto& c : components) {
      const double w = two_pi * c.freq;
      cxd z = c.amp * std::polar(1.0, w * (t_start + 0.5 * dt));
      const cxd step = std::polar(1.0, w * dt);
      for (int j = 0; j < count; ++j) {
        out[j] += 2.0 * z.real();
        z *= step;
      }
    }
  }
};

/// Draws one ensemble member. Coefficients are Gaussian per bin with
/// variance set by the one-sided PSD; the draw is keyed by (seed, trial, bin)
/// so results do not depend on evaluation order.
inline NoiseRealization sample_noise(const NoiseModel& model,
                                     std::uint64_t trial) {
  model.validate();
  NoiseRealization out;
  if (model.rms == 0.0) return out;
  const double df = model.f_band / model.bins;
  const double var_per_bin = model.psd_amplitude() * df;  // S(f_k) * df
  out.components.reserve(model.bins);
  for (int k = 0; k < model.bins; ++k) {
    double fk = model.f_center - 0.5 * model.f_band + (k + 0.5) * df;
    // a one-sided spectrum has no negative bins; fold them back onto |f|
    if (fk < 0.0) fk = -fk;
    const auto [g1, g2] = rng::gaussian_pair(
        rng::key(model.seed, trial, static_cast<std::uint64_t>(k)), 0);
    if (fk == 0.0) {
      out.a0 += std::sqrt(var_per_bin) * g1;
    } else {
      const double half_sigma = 0.5 * std::sqrt(var_per_bin);
      out.components.push_back({fk, cxd{half_sigma * g1, half_sigma * g2}});
    }
  }
  return out;
}

}  // namespace pla
