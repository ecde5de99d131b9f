#pragma once

#include <cmath>
#include <numbers>

namespace pla {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wraps an angle into the canonical storage range [0, 2*pi).
inline double wrap_two_pi(double x) {
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;  // fmod can land exactly on 2*pi after the add
  return r;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_pi(double x) {
  double r = std::fmod(x, two_pi);
  if (r > pi) r -= two_pi;
  if (r <= -pi) r += two_pi;
  return r;
}

/// Signed circular distance a-b mapped into (-pi, pi].
inline double circular_diff(double a, double b) { return wrap_pi(a - b); }

/// Reduces x modulo pi into (-pi/2, pi/2] and reports the integer class k
/// with x = gamma + k*pi.
struct ModPi {
  double gamma;
  long k;
};

inline ModPi reduce_mod_pi(double x) {
  double k = std::floor(x / pi + 0.5);
  double g = x - k * pi;
  if (g <= -pi / 2) {  // boundary: prefer +pi/2 representative
    g += pi;
    k -= 1.0;
  } else if (g > pi / 2) {
    g -= pi;
    k += 1.0;
  }
  return {g, static_cast<long>(k)};
}

}  // namespace pla
