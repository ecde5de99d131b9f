#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pla/angles.hpp"
#include "pla/envelope.hpp"
#include "pla/unitary.hpp"

namespace pla {

/// Toggling-frame phases of a pulse train; same length as the source
/// sequence, each entry in (-pi, pi].
struct ToggledSequence {
  std::vector<double> phases;

  size_t size() const { return phases.size(); }
};

/// An odd train of pi pulses: phases (stored in [0, 2 pi)), a Rabi frequency,
/// and a shared pulse envelope (square by default). Pulse l occupies
/// [(l-1) t_d, l t_d] where t_d is the envelope duration.
class PulseSequence {
 public:
  PulseSequence(std::string name, std::vector<double> phases_rad, double rabi,
                std::shared_ptr<const Envelope> envelope = nullptr)
      : name_(std::move(name)), rabi_(rabi), envelope_(std::move(envelope)) {
    if (phases_rad.empty() || phases_rad.size() % 2 == 0) {
      throw std::invalid_argument(
          "sequence: pulse count must be a positive odd integer");
    }
    if (!(rabi_ > 0.0)) {
      throw std::invalid_argument("sequence: rabi frequency must be > 0");
    }
    phases_.reserve(phases_rad.size());
    for (double p : phases_rad) phases_.push_back(wrap_two_pi(p));
    if (!envelope_) {
      envelope_ = std::make_shared<Envelope>(Envelope::square(rabi_));
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<double>& phases() const { return phases_; }
  double rabi() const { return rabi_; }
  const Envelope& envelope() const { return *envelope_; }
  std::shared_ptr<const Envelope> envelope_ptr() const { return envelope_; }

  size_t size() const { return phases_.size(); }
  double pulse_duration() const { return envelope_->duration(); }
  double duration() const { return pulse_duration() * size(); }

  PulseSequence with_envelope(std::shared_ptr<const Envelope> env) const {
    return PulseSequence(name_, phases_, rabi_, std::move(env));
  }

  PulseSequence with_name(std::string name) const {
    return PulseSequence(std::move(name), phases_, rabi_, envelope_);
  }

 private:
  std::string name_;
  std::vector<double> phases_;
  double rabi_;
  std::shared_ptr<const Envelope> envelope_;
};

/// Lab-frame to toggling-frame phase transform:
///   phi'_j = -(-1)^j phi_j - sum_{k<j} (-1)^k 2 phi_k,
/// reduced into (-pi, pi]. No global offset is applied; every downstream
/// constraint quantity is invariant under a uniform offset.
inline ToggledSequence toggling_phases(const PulseSequence& seq) {
  ToggledSequence out;
  out.phases.reserve(seq.size());
  double alt_sum = 0.0;  // sum_{k<j} (-1)^k 2 phi_k
  for (size_t j = 1; j <= seq.size(); ++j) {
    const double phi = seq.phases()[j - 1];
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^j
    out.phases.push_back(wrap_pi(-sign * phi - alt_sum));
    alt_sum += sign * 2.0 * phi;
  }
  return out;
}

/// Inverse transform: recovers lab phases (in [0, 2 pi)) whose toggling
/// phases reproduce the input modulo 2 pi.
inline std::vector<double> lab_phases(const ToggledSequence& tog) {
  std::vector<double> out;
  out.reserve(tog.size());
  double alt_sum = 0.0;
  for (size_t j = 1; j <= tog.size(); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double phi = -sign * (tog.phases[j - 1] + alt_sum);
    out.push_back(wrap_two_pi(phi));
    alt_sum += sign * 2.0 * phi;
  }
  return out;
}

struct GateAngle {
  double gamma;  // rotation-axis angle in (-pi/2, pi/2]; 0 means an X gate
  long k;        // integer class: alternating phase sum = gamma + k*pi
};

/// Alternating phase sum g = sum (-1)^l phi_l reduced modulo pi.
inline GateAngle gate_angle(const PulseSequence& seq) {
  double g = 0.0;
  for (size_t l = 1; l <= seq.size(); ++l) {
    g += (l % 2 == 0 ? 1.0 : -1.0) * seq.phases()[l - 1];
  }
  const ModPi r = reduce_mod_pi(g);
  return {r.gamma, r.k};
}

/// Raw alternating phase sum without reduction (used by the solver).
inline double gate_sum(const std::vector<double>& phases) {
  double g = 0.0;
  for (size_t l = 1; l <= phases.size(); ++l) {
    g += (l % 2 == 0 ? 1.0 : -1.0) * phases[l - 1];
  }
  return g;
}

/// Error-free propagator of the sequence: a product of pi rotations about
/// the equatorial axes set by the lab phases.
inline Unitary2 ideal_unitary(const PulseSequence& seq) {
  Unitary2 u = Unitary2::identity();
  for (double phi : seq.phases()) {
    u = Unitary2::equatorial_rotation(phi, pi) * u;
  }
  return u;
}

// -- named sequence catalog --------------------------------------------------

namespace catalog_detail {

// Numerically solved trains, 15 significant digits; fixtures of record.
inline constexpr double pla2_1_phases[9] = {
    1.76715945118259, 5.41431157276639, 0.60338726707880,
    2.25267362096692, 5.66568802156378, 0.11541193070770,
    2.91932560661088, 3.75846738675240, 0.58530416475736};

inline constexpr double pla3_1_phases[11] = {
    4.83865251534654, 1.84379790507494, 1.93262975911420, 0.48888316408261,
    3.13701277837872, 3.67903366892586, 3.52519916847217, 5.73340443857318,
    4.41388024396790, 4.49690511625724, 1.53624248122411};

}  // namespace catalog_detail

inline constexpr double default_rabi = 1.5e6;  // rad/s

/// The five-pulse F1 train: phases (-3a, -a, 0, a, 3a) with a = acos(-1/4).
inline PulseSequence f1_sequence(double rabi = default_rabi) {
  const double a = std::acos(-0.25);
  return PulseSequence("F1", {-3 * a, -a, 0.0, a, 3 * a}, rabi);
}

inline PulseSequence knill_sequence(double rabi = default_rabi) {
  return PulseSequence("Knill", {pi / 6, 0.0, pi / 2, 0.0, pi / 6}, rabi);
}

inline PulseSequence primitive_sequence(double rabi = default_rabi) {
  return PulseSequence("primitive", {0.0}, rabi);
}

/// The second five-pulse solution of the first-order drift criteria:
/// (-b, -2b+d, -2b+2d, -2b+d, -b) with b = acos((1-2 sqrt10)/6) and
/// d = -acos((-2+sqrt10)/3).
inline PulseSequence pla1_2_sequence(double rabi = default_rabi) {
  const double b = std::acos((1.0 - 2.0 * std::sqrt(10.0)) / 6.0);
  const double d = -std::acos((-2.0 + std::sqrt(10.0)) / 3.0);
  return PulseSequence(
      "PLA1_2", {-b, -2 * b + d, -2 * b + 2 * d, -2 * b + d, -b}, rabi);
}

inline PulseSequence pla2_1_sequence(double rabi = default_rabi) {
  using namespace catalog_detail;
  return PulseSequence(
      "PLA2_1", std::vector<double>(std::begin(pla2_1_phases),
                                    std::end(pla2_1_phases)), rabi);
}

inline PulseSequence pla3_1_sequence(double rabi = default_rabi) {
  using namespace catalog_detail;
  return PulseSequence(
      "PLA3_1", std::vector<double>(std::begin(pla3_1_phases),
                                    std::end(pla3_1_phases)), rabi);
}

inline std::vector<PulseSequence> catalog(double rabi = default_rabi) {
  return {primitive_sequence(rabi), knill_sequence(rabi), f1_sequence(rabi),
          pla1_2_sequence(rabi),    pla2_1_sequence(rabi),
          pla3_1_sequence(rabi)};
}

/// Case-sensitive catalog lookup by name; throws on unknown names.
inline PulseSequence catalog_lookup(const std::string& name,
                                    double rabi = default_rabi) {
  for (auto& seq : catalog(rabi)) {
    if (seq.name() == name) return seq;
  }
  throw std::invalid_argument("unknown sequence name: " + name);
}

}  // namespace pla
