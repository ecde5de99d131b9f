#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "pla/angles.hpp"

namespace pla {

using cxd = std::complex<double>;

/// Dimensionless rotation-error vector: U = U0 * exp(-i a.sigma).
struct ErrorVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// 2x2 complex matrix constrained (by use) to unitaries; entries row-major.
class Unitary2 {
 public:
  cxd u00{1.0, 0.0}, u01{0.0, 0.0}, u10{0.0, 0.0}, u11{1.0, 0.0};

  Unitary2() = default;
  Unitary2(cxd a, cxd b, cxd c, cxd d) : u00(a), u01(b), u10(c), u11(d) {}

  static Unitary2 identity() { return {}; }

  /// Rotation by `angle` about the equatorial axis (cos phase, sin phase, 0).
  static Unitary2 equatorial_rotation(double phase, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const cxd e_m{std::cos(phase), -std::sin(phase)};
    const cxd e_p{std::cos(phase), std::sin(phase)};
    return {cxd{c, 0.0}, cxd{0.0, -s} * e_m, cxd{0.0, -s} * e_p, cxd{c, 0.0}};
  }

  /// exp(-i a.sigma) for an arbitrary rotation-error vector.
  static Unitary2 exp_error(const ErrorVector& a) {
    const double n = a.norm();
    if (n == 0.0) return identity();
    const double c = std::cos(n);
    const double s = std::sin(n) / n;
    const cxd i{0.0, 1.0};
    return {c - i * s * a.z, -i * s * (a.x - i * a.y),
            -i * s * (a.x + i * a.y), c + i * s * a.z};
  }

  Unitary2 adjoint() const {
    return {std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11)};
  }

  cxd trace() const { return u00 + u11; }
  cxd det() const { return u00 * u11 - u01 * u10; }

  friend Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
    return {a.u00 * b.u00 + a.u01 * b.u10, a.u00 * b.u01 + a.u01 * b.u11,
            a.u10 * b.u00 + a.u11 * b.u10, a.u10 * b.u01 + a.u11 * b.u11};
  }

  /// Max-abs deviation of U^dag U from the identity.
  double unitarity_residual() const {
    const Unitary2 m = adjoint() * (*this);
    double r = std::abs(m.u00 - 1.0);
    r = std::max(r, std::abs(m.u11 - 1.0));
    r = std::max(r, std::abs(m.u01));
    r = std::max(r, std::abs(m.u10));
    return r;
  }

  bool is_unitary(double tol = 1e-12) const {
    return unitarity_residual() <= tol &&
           std::abs(std::abs(det()) - 1.0) <= tol;
  }
};

namespace detail {

inline void require_unitary(const Unitary2& u, const char* role) {
  if (u.unitarity_residual() > 1e-9) {
    throw std::invalid_argument(std::string("non-unitary ") + role +
                                " operator passed to fidelity");
  }
}

}  // namespace detail

/// Gate infidelity 1 - F. Evaluated through the traceless part of
/// U0^dag U, which for unitary inputs equals sin^2|a| exactly and stays
/// accurate down to infidelities near the double-precision floor.
inline double infidelity(const Unitary2& ideal, const Unitary2& actual) {
  detail::require_unitary(ideal, "ideal");
  detail::require_unitary(actual, "actual");
  const Unitary2 m = ideal.adjoint() * actual;
  const cxd half_tr = 0.5 * m.trace();
  const double n2 = std::norm(m.u00 - half_tr) + std::norm(m.u01) +
                    std::norm(m.u10) + std::norm(m.u11 - half_tr);
  const double inf = 0.5 * n2;
  return std::clamp(inf, 0.0, 1.0);
}

/// Operational fidelity |Tr[U0^dag U]|^2 / 4 in [0, 1].
inline double fidelity(const Unitary2& ideal, const Unitary2& actual) {
  detail::require_unitary(ideal, "ideal");
  detail::require_unitary(actual, "actual");
  const double t = std::abs((ideal.adjoint() * actual).trace());
  return std::clamp(0.25 * t * t, 0.0, 1.0);
}

}  // namespace pla
