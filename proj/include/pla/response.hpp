#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "pla/design.hpp"
#include "pla/noise.hpp"
#include "pla/quadrature.hpp"
#include "pla/sequence.hpp"

namespace pla {

/// Tabulated amplitude filter function h_a(f) of one sequence.
struct FilterCurve {
  std::string name;
  std::vector<double> frequencies;  // Hz
  std::vector<double> values;       // dimensionless
};

/// Perturbative infidelity prediction at one noise configuration.
struct TheoryPrediction {
  double first_order = 0.0;      // filter-function (linear-response) term
  double dc_second_order = 0.0;  // second-order Magnus term at zero frequency
  double dc_quadrature = 0.0;    // exact zero-frequency reference value
  double total = 0.0;            // first_order + dc_second_order
};

namespace detail {

// Fourier transform of the envelope over one pulse in dimensionless time:
// integral of G(u/Omega) exp(i nu u) du over [0, u_d].
inline cxd envelope_transform(const Envelope& env, double omega, double nu) {
  const double u_d = omega * env.duration();
  if (env.is_square()) {
    const cxd i{0.0, 1.0};
    return (std::polar(1.0, nu * u_d) - 1.0) / (i * nu);
  }
  const int panels = std::max(1, static_cast<int>(std::abs(nu) * u_d / 16.0) + 1);
  const double re = integrate(
      [&](double u) { return env.value(u / omega) * std::cos(nu * u); }, 0.0,
      u_d, 48, panels);
  const double im = integrate(
      [&](double u) { return env.value(u / omega) * std::sin(nu * u); }, 0.0,
      u_d, 48, panels);
  return {re, im};
}

// h_a at dimensionless frequency nu = omega_noise / Omega.
//
// Two routes: a per-pulse closed form (segment transforms), and a Taylor
// series in the drift moments used when nu * Omega * tau is small, where the
// closed form loses digits to cancellation under steep roll-off.
inline double filter_eval(const ToggledSequence& tog, const Envelope& env,
                          double omega, double nu) {
  if (nu == 0.0) return 0.0;
  const size_t n = tog.size();
  const double u_d = omega * env.duration();
  const double nu_tau = std::abs(nu) * u_d * n;

  if (nu_tau <= 0.5) {
    // series: rho_tilde = -i sum_p (i nu)^p nu^p... accumulated per component
    cxd a{0.0, 0.0}, b{0.0, 0.0};  // sums over w_p and conj(w_p)
    cxd inu_pow{1.0, 0.0};
    const cxd inu{0.0, nu};
    for (int p = 0; p <= 40; ++p) {
      const cxd w =
          env.is_square()
              ? continuous_moment_square_impl(tog, p)
              : continuous_moment_env_impl(tog, env, omega, p);
      a += inu_pow * w;
      b += inu_pow * std::conj(w);
      const double term = std::abs(inu_pow) * std::abs(w);
      inu_pow *= inu;
      if (p > 4 && term < 1e-22 * (std::abs(a) + std::abs(b) + 1e-300)) break;
    }
    return 0.5 * nu * nu * (std::norm(a) + std::norm(b));
  }

  const cxd g_hat = envelope_transform(env, omega, nu);
  cxd zeta{0.0, 0.0}, xi{0.0, 0.0};
  for (size_t l = 1; l <= n; ++l) {
    const cxd start = std::polar(1.0, nu * u_d * (l - 1));
    const cxd r = std::polar(1.0, tog.phases[l - 1]);
    zeta += r * start;
    xi += std::conj(r) * start;
  }
  zeta *= g_hat;
  xi *= g_hat;
  return 0.125 * nu * nu * (std::norm(zeta) + std::norm(xi));
}

}  // namespace detail

/// Amplitude filter function h_a(f) >= 0 with h_a(0) = 0, using the
/// sequence's own envelope.
inline double filter_function(const PulseSequence& seq, double f_hz) {
  if (!std::isfinite(f_hz)) {
    throw std::invalid_argument("filter_function: frequency must be finite");
  }
  const double nu = two_pi * f_hz / seq.rabi();
  return detail::filter_eval(toggling_phases(seq), seq.envelope(), seq.rabi(),
                             nu);
}

/// Filter function with an explicit envelope override.
inline double filter_function_env(const PulseSequence& seq,
                                  const Envelope& env, double f_hz) {
  if (!std::isfinite(f_hz)) {
    throw std::invalid_argument("filter_function: frequency must be finite");
  }
  const double nu = two_pi * f_hz / seq.rabi();
  return detail::filter_eval(toggling_phases(seq), env, seq.rabi(), nu);
}

inline std::vector<double> log_space(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw std::invalid_argument("log_space: need 0 < lo < hi and points >= 2");
  }
  std::vector<double> out(points);
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = lo * std::exp(i * step);
  out.back() = hi;
  return out;
}

inline FilterCurve filter_curve(const PulseSequence& seq,
                                const std::vector<double>& freqs) {
  FilterCurve c;
  c.name = seq.name();
  c.frequencies = freqs;
  c.values.reserve(freqs.size());
  for (double f : freqs) c.values.push_back(filter_function(seq, f));
  return c;
}

struct SlopeFit {
  double slope = 0.0;
  double filter_order = 0.0;  // slope/2 - 1
};

/// Least-squares slope of log h against log f over [f_lo, f_hi]; the default
/// window sits in the asymptotic roll-off region below the Rabi frequency.
inline SlopeFit filter_order(const PulseSequence& seq, double f_lo = 0.0,
                             double f_hi = 0.0, int points = 21) {
  if (f_lo == 0.0 && f_hi == 0.0) {
    f_lo = 1e-4 * seq.rabi() / two_pi;
    f_hi = 1e-3 * seq.rabi() / two_pi;
  }
  if (!(f_lo > 0.0) || !(f_hi > f_lo) || points < 2) {
    throw std::invalid_argument("filter_order: degenerate fit window");
  }
  const std::vector<double> fs = log_space(f_lo, f_hi, points);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double f : fs) {
    const double h = filter_function(seq, f);
    if (!(h > 0.0)) {
      throw std::invalid_argument("filter_order: filter vanished in window");
    }
    const double x = std::log(f);
    const double y = std::log(h);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(fs.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, slope / 2.0 - 1.0};
}

/// Linear-response infidelity for narrow-band noise centered on f_c:
/// h_a(f_c) sigma^2 / (2 pi f_c)^2.
inline double first_order_infidelity(const PulseSequence& seq,
                                     const NoiseModel& noise) {
  noise.validate();
  if (!(noise.f_center > 0.0)) {
    throw std::invalid_argument(
        "first_order_infidelity: f_center must be > 0 (use the DC limit "
        "operations at zero frequency)");
  }
  if (noise.rms == 0.0) return 0.0;
  const double nu = two_pi * noise.f_center / seq.rabi();
  const double sig = noise.rms / seq.rabi();
  return filter_function(seq, noise.f_center) * sig * sig / (nu * nu);
}

namespace detail {

inline double toggling_sine_double_sum(const ToggledSequence& tog) {
  double s = 0.0;
  for (size_t l = 2; l <= tog.size(); ++l) {
    for (size_t m = 1; m < l; ++m) {
      s += std::sin(tog.phases[m - 1] - tog.phases[l - 1]);
    }
  }
  return s;
}

inline double dc_second_order_impl(const ToggledSequence& tog,
                                   const Envelope& env, double omega,
                                   double sigma_beta) {
  if (sigma_beta == 0.0) return 0.0;
  const double s = toggling_sine_double_sum(tog);
  const double i0 = env.moment(0) * omega;  // = pi under normalization
  const double sig = sigma_beta / omega;
  const double dbl = i0 * i0 * sig * sig;
  // <|a2_DC|^2> with Gaussian fourth moment 3 sigma^4
  return (3.0 / 16.0) * dbl * dbl * s * s;
}

}  // namespace detail

/// Ensemble-average squared second-order Magnus term for constant (DC)
/// amplitude error with Gaussian statistics. Vanishes identically for
/// sequences with zero toggling-frame area, such as F1.
inline double dc_second_order(const PulseSequence& seq, double sigma_beta) {
  if (sigma_beta < 0.0) {
    throw std::invalid_argument("dc_second_order: sigma must be >= 0");
  }
  return detail::dc_second_order_impl(toggling_phases(seq), seq.envelope(),
                                      seq.rabi(), sigma_beta);
}

/// Same with an explicit envelope override.
inline double dc_second_order_env(const PulseSequence& seq,
                                  const Envelope& env, double sigma_beta) {
  if (sigma_beta < 0.0) {
    throw std::invalid_argument("dc_second_order: sigma must be >= 0");
  }
  return detail::dc_second_order_impl(toggling_phases(seq), env, seq.rabi(),
                                      sigma_beta);
}

/// Exact zero-frequency infidelity: Gauss-Hermite average of the propagator
/// infidelity over constant errors beta ~ Normal(0, sigma^2). Serves as the
/// ground truth for the DC plateau, covering all Magnus orders.
inline double dc_limit_quadrature(const PulseSequence& seq, double sigma_beta,
                                  int order = 32) {
  if (order < 8) {
    throw std::invalid_argument("dc_limit_quadrature: order must be >= 8");
  }
  if (sigma_beta < 0.0) {
    throw std::invalid_argument("dc_limit_quadrature: sigma must be >= 0");
  }
  if (sigma_beta == 0.0) return 0.0;
  const Unitary2 u0 = ideal_unitary(seq);
  const double area = seq.envelope().moment(0);  // I_0 = pi / Omega
  return gaussian_expectation(
      [&](double beta) {
        Unitary2 u = Unitary2::identity();
        const double angle = area * (seq.rabi() + beta);
        for (double phi : seq.phases()) {
          u = Unitary2::equatorial_rotation(phi, angle) * u;
        }
        return infidelity(u0, u);
      },
      sigma_beta, order);
}

/// Assembles the per-point theory prediction for a noise model.
inline TheoryPrediction theory_curve(const PulseSequence& seq,
                                     const NoiseModel& noise) {
  TheoryPrediction p;
  p.first_order = first_order_infidelity(seq, noise);
  p.dc_second_order = dc_second_order(seq, noise.rms);
  p.dc_quadrature = dc_limit_quadrature(seq, noise.rms);
  p.total = p.first_order + p.dc_second_order;
  return p;
}

/// Frequency window, in omega/Omega, over which the higher-order sequence
/// `alt` beats the reference `ref` on predicted infidelity.
struct RegimeBounds {
  double lower_nu = 0.0;
  double upper_nu = 0.0;

  bool empty() const { return lower_nu >= upper_nu; }
};

/// Analytic boundary pair: the lower bound is where alt's DC second-order
/// floor meets ref's linear-response roll-off, the upper where the two
/// roll-offs cross. ref must satisfy the order-1 criteria and alt order-2.
inline RegimeBounds regime_boundaries(const PulseSequence& ref,
                                      const PulseSequence& alt,
                                      double sigma_ratio) {
  if (sigma_ratio < 0.0) {
    throw std::invalid_argument("regime_boundaries: sigma ratio must be >= 0");
  }
  if (!check_pla(ref, 1).satisfies()) {
    throw std::invalid_argument(
        "regime_boundaries: reference sequence fails the order-1 criteria");
  }
  if (!check_pla(alt, 2).satisfies()) {
    throw std::invalid_argument(
        "regime_boundaries: alternative sequence fails the order-2 criteria");
  }
  const auto c2 = continuous_moment(ref, 2);
  const auto c3 = continuous_moment(alt, 3);
  const double c2n = std::hypot(c2[0], c2[1]);
  const double c3n = std::hypot(c3[0], c3[1]);
  const double dsum =
      std::abs(detail::toggling_sine_double_sum(toggling_phases(alt)));
  RegimeBounds b;
  b.lower_nu = std::sqrt(sigma_ratio * (std::sqrt(3.0) / 4.0) * pi * pi *
                         dsum / c2n);
  b.upper_nu = c2n / c3n;
  return b;
}

/// Grid of predicted infidelity ratios alt/ref over (sigma/Omega, omega/Omega);
/// cells below 1 mark the regime where alt wins.
inline std::vector<std::vector<double>> regime_map(
    const PulseSequence& ref, const PulseSequence& alt,
    const std::vector<double>& nu_grid, const std::vector<double>& sigma_grid) {
  if (nu_grid.empty() || sigma_grid.empty()) {
    throw std::invalid_argument("regime_map: grids must be non-empty");
  }
  std::vector<std::vector<double>> out(sigma_grid.size());
  const double omega = ref.rabi();
  for (size_t i = 0; i < sigma_grid.size(); ++i) {
    out[i].resize(nu_grid.size());
    const double sigma = sigma_grid[i] * omega;
    const double dc_ref = dc_second_order(ref, sigma);
    const double dc_alt = dc_second_order(alt, sigma);
    for (size_t j = 0; j < nu_grid.size(); ++j) {
      NoiseModel m;
      m.f_center = nu_grid[j] * omega / two_pi;
      m.rms = sigma;
      const double tot_ref = first_order_infidelity(ref, m) + dc_ref;
      const double tot_alt = first_order_infidelity(alt, m) + dc_alt;
      out[i][j] = tot_alt / tot_ref;
    }
  }
  return out;
}

}  // namespace pla
