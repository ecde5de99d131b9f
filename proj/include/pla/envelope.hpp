#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pla/angles.hpp"
#include "pla/quadrature.hpp"

namespace pla {

enum class EnvelopeKind { square, raised_cosine, truncated_gaussian, custom };

inline std::string to_string(EnvelopeKind k) {
  switch (k) {
    case EnvelopeKind::square: return "square";
    case EnvelopeKind::raised_cosine: return "raised_cosine";
    case EnvelopeKind::truncated_gaussian: return "truncated_gaussian";
    case EnvelopeKind::custom: return "custom";
  }
  return "square";
}

/// Pulse-shape function G(t) on [0, t_d], zero outside, with cached moment
/// integrals I_m = integral of G(t) t^m dt.
///
/// G is normalized at construction so that the pulse area matches a pi
/// rotation at the nominal Rabi frequency: omega0 * I_0 = pi. The square
/// envelope therefore has G identically 1 and t_d = pi/omega0.
class Envelope {
 public:
  static constexpr int max_cached_moment = 40;

  static Envelope square(double omega0) {
    return Envelope(EnvelopeKind::square, pi / check_omega(omega0), omega0, {});
  }

  /// G proportional to 1 - cos(2 pi t / t_d). Default duration pi/omega0.
  static Envelope raised_cosine(double omega0, double t_d = 0.0) {
    check_omega(omega0);
    return Envelope(EnvelopeKind::raised_cosine,
                    t_d > 0.0 ? t_d : pi / omega0, omega0, {});
  }

  /// Gaussian bump centered on t_d/2 with width t_d/6, truncated to [0, t_d].
  static Envelope truncated_gaussian(double omega0, double t_d = 0.0) {
    check_omega(omega0);
    return Envelope(EnvelopeKind::truncated_gaussian,
                    t_d > 0.0 ? t_d : pi / omega0, omega0, {});
  }

  /// Piecewise-linear interpolant of (t, g) samples on [0, t_d], renormalized.
  static Envelope custom(double omega0, double t_d,
                         std::vector<std::pair<double, double>> samples) {
    check_omega(omega0);
    if (t_d <= 0.0) throw std::invalid_argument("envelope: t_d must be > 0");
    if (samples.size() < 2) {
      throw std::invalid_argument("envelope: need at least two samples");
    }
    for (size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].second < 0.0) {
        throw std::invalid_argument("envelope: sample values must be >= 0");
      }
      if (i > 0 && samples[i].first <= samples[i - 1].first) {
        throw std::invalid_argument("envelope: sample times must increase");
      }
    }
    return Envelope(EnvelopeKind::custom, t_d, omega0, std::move(samples));
  }

  EnvelopeKind kind() const { return kind_; }
  bool is_square() const { return kind_ == EnvelopeKind::square; }
  double duration() const { return t_d_; }
  double omega0() const { return omega0_; }

  /// Normalized shape value G(t); zero outside [0, t_d].
  double value(double t) const {
    if (t < 0.0 || t > t_d_) return 0.0;
    return scale_ * raw_shape(t);
  }

  /// Moment integral I_m in seconds^(m+1).
  double moment(int m) const {
    if (m < 0) throw std::invalid_argument("envelope: moment order must be >= 0");
    if (m <= max_cached_moment) return moments_[m];
    return compute_moment(m);
  }

  /// Dimensionless moment omega0^(m+1) * I_m.
  double moment_dimensionless(int m) const {
    return moment(m) * std::pow(omega0_, m + 1);
  }

 private:
  Envelope(EnvelopeKind kind, double t_d, double omega0,
           std::vector<std::pair<double, double>> samples)
      : kind_(kind), t_d_(t_d), omega0_(omega0), samples_(std::move(samples)) {
    scale_ = 1.0;
    const double raw_area = compute_moment(0);
    scale_ = (pi / omega0_) / raw_area;
    moments_.resize(max_cached_moment + 1);
    for (int m = 0; m <= max_cached_moment; ++m) {
      moments_[m] = compute_moment(m);
    }
    if (std::abs(omega0_ * moments_[0] - pi) > 1e-10 * pi) {
      throw std::logic_error("envelope: area normalization failed");
    }
  }

  static double check_omega(double omega0) {
    if (omega0 <= 0.0) {
      throw std::invalid_argument("envelope: omega0 must be > 0");
    }
    return omega0;
  }

  double raw_shape(double t) const {
    switch (kind_) {
      case EnvelopeKind::square:
        return 1.0;
      case EnvelopeKind::raised_cosine:
        return 1.0 - std::cos(two_pi * t / t_d_);
      case EnvelopeKind::truncated_gaussian: {
        const double s = t_d_ / 6.0;
        const double d = t - 0.5 * t_d_;
        return std::exp(-d * d / (2.0 * s * s));
      }
      case EnvelopeKind::custom: {
        if (t <= samples_.front().first) return samples_.front().second;
        if (t >= samples_.back().first) return samples_.back().second;
        size_t hi = 1;
        while (samples_[hi].first < t) ++hi;
        const auto& [t0, g0] = samples_[hi - 1];
        const auto& [t1, g1] = samples_[hi];
        return g0 + (g1 - g0) * (t - t0) / (t1 - t0);
      }
    }
    return 0.0;
  }

  double compute_moment(int m) const {
    if (kind_ == EnvelopeKind::square) {
      return scale_ * std::pow(t_d_, m + 1) / (m + 1);
    }
    if (kind_ == EnvelopeKind::custom) {
      // integrate each linear piece, clipped to [0, t_d]
      double total = 0.0;
      auto knot = [&](size_t i) {
        return std::clamp(samples_[i].first, 0.0, t_d_);
      };
      // leading/trailing flat extensions
      if (samples_.front().first > 0.0) {
        total += integrate(
            [&](double t) { return samples_.front().second * std::pow(t, m); },
            0.0, std::min(samples_.front().first, t_d_), 24);
      }
      for (size_t i = 1; i < samples_.size(); ++i) {
        const double a = knot(i - 1), b = knot(i);
        if (b <= a) continue;
        total += integrate(
            [&](double t) { return raw_shape_linear(i, t) * std::pow(t, m); },
            a, b, 24);
      }
      if (samples_.back().first < t_d_) {
        total += integrate(
            [&](double t) { return samples_.back().second * std::pow(t, m); },
            std::max(samples_.back().first, 0.0), t_d_, 24);
      }
      return scale_ * total;
    }
    return scale_ * integrate([&](double t) { return raw_shape(t) *
                                                      std::pow(t, m); },
                              0.0, t_d_, 64, 8);
  }

  double raw_shape_linear(size_t hi, double t) const {
    const auto& [t0, g0] = samples_[hi - 1];
    const auto& [t1, g1] = samples_[hi];
    return g0 + (g1 - g0) * (t - t0) / (t1 - t0);
  }

  EnvelopeKind kind_;
  double t_d_;
  double omega0_;
  double scale_;
  std::vector<std::pair<double, double>> samples_;
  std::vector<double> moments_;
};

}  // namespace pla
