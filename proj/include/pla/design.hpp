#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pla/angles.hpp"
#include "pla/rng.hpp"
#include "pla/sequence.hpp"

namespace pla {

/// Toggling-frame constraint moment sum_l (l-1)^p exp(i phi'_l).
inline cxd toggled_moment(const ToggledSequence& tog, int p) {
  if (p < 0) throw std::invalid_argument("toggled_moment: p must be >= 0");
  cxd sum{0.0, 0.0};
  for (size_t l = 1; l <= tog.size(); ++l) {
    const double w = (p == 0) ? 1.0 : std::pow(double(l - 1), p);
    sum += w * cxd{std::cos(tog.phases[l - 1]), std::sin(tog.phases[l - 1])};
  }
  return sum;
}

/// Residual magnitudes of the power-law amplitude criteria at order n.
struct ConstraintReport {
  int n = 0;
  std::vector<double> residuals;  // |c'_p| for p = 0..n
  double gate_residual = 0.0;     // |sin g(phi)|

  bool satisfies(double tol = 1e-9) const {
    if (gate_residual > tol) return false;
    for (double r : residuals) {
      if (r > tol) return false;
    }
    return true;
  }
};

inline ConstraintReport check_pla(const PulseSequence& seq, int n) {
  if (n < 0) throw std::invalid_argument("check_pla: n must be >= 0");
  ConstraintReport rep;
  rep.n = n;
  const ToggledSequence tog = toggling_phases(seq);
  rep.residuals.reserve(n + 1);
  for (int p = 0; p <= n; ++p) {
    rep.residuals.push_back(std::abs(toggled_moment(tog, p)));
  }
  rep.gate_residual = std::abs(std::sin(gate_sum(seq.phases())));
  return rep;
}

namespace detail {

// Dimensionless continuous drift moment Omega^(p+1) c_p from toggling
// moments and envelope moment integrals:
//   c_p = (1/2) sum_q I_(p-q) t_d^q / (q! (p-q)!) c'_q.
inline cxd continuous_moment_env_impl(const ToggledSequence& tog,
                                      const Envelope& env, double omega,
                                      int p) {
  const double u_d = omega * env.duration();
  cxd sum{0.0, 0.0};
  double q_fact = 1.0;
  for (int q = 0; q <= p; ++q) {
    if (q > 0) q_fact *= q;
    double pq_fact = 1.0;
    for (int k = 2; k <= p - q; ++k) pq_fact *= k;
    const double moment = env.moment(p - q) * std::pow(omega, p - q + 1);
    sum += toggled_moment(tog, q) * moment * std::pow(u_d, q) /
           (q_fact * pq_fact);
  }
  return 0.5 * sum;
}

// Square-envelope binomial reduction of the same moment:
//   Omega^(p+1) c_p = (pi^(p+1)/2) sum_q c'_q / (q! (p-q+1)!).
inline cxd continuous_moment_square_impl(const ToggledSequence& tog, int p) {
  cxd sum{0.0, 0.0};
  double q_fact = 1.0;
  for (int q = 0; q <= p; ++q) {
    if (q > 0) q_fact *= q;
    double pq1_fact = 1.0;
    for (int k = 2; k <= p - q + 1; ++k) pq1_fact *= k;
    sum += toggled_moment(tog, q) / (q_fact * pq1_fact);
  }
  return 0.5 * std::pow(pi, p + 1) * sum;
}

}  // namespace detail

/// Continuous drift moment in dimensionless form Omega^(p+1) c_p, with the
/// time origin at the start of the sequence. The z component is always zero,
/// so the xy plane is returned as (real, imag, 0).
inline std::array<double, 3> continuous_moment(const PulseSequence& seq,
                                               int p) {
  if (p < 0) throw std::invalid_argument("continuous_moment: p must be >= 0");
  const ToggledSequence tog = toggling_phases(seq);
  const cxd c =
      seq.envelope().is_square()
          ? detail::continuous_moment_square_impl(tog, p)
          : detail::continuous_moment_env_impl(tog, seq.envelope(), seq.rabi(),
                                               p);
  return {c.real(), c.imag(), 0.0};
}

/// Same moment with the time origin shifted to the sequence midpoint, where
/// time-symmetric sequences have vanishing odd orders.
inline std::array<double, 3> continuous_moment_centered(
    const PulseSequence& seq, int p) {
  if (p < 0) throw std::invalid_argument("continuous_moment: p must be >= 0");
  const ToggledSequence tog = toggling_phases(seq);
  const double half = 0.5 * seq.rabi() * seq.duration();  // Omega tau / 2
  cxd sum{0.0, 0.0};
  double shift_pow = 1.0;  // (-half)^(p-m) / (p-m)! built backwards
  // accumulate sum_m (-half)^(p-m)/(p-m)! c_m
  for (int m = p; m >= 0; --m) {
    const cxd c_m =
        seq.envelope().is_square()
            ? detail::continuous_moment_square_impl(tog, m)
            : detail::continuous_moment_env_impl(tog, seq.envelope(),
                                                 seq.rabi(), m);
    sum += shift_pow * c_m;
    shift_pow *= -half / (p - m + 1);
  }
  return {sum.real(), sum.imag(), 0.0};
}

/// Objective whose zeros are exactly the order-n criteria:
///   sin^2(g - gamma) + sum_p |c'_p|^2 / N^(2p+2).
/// The N-power scaling keeps every term O(1) across orders.
inline double objective(const std::vector<double>& phases, int n,
                        double gate_target = 0.0) {
  if (n < 0) throw std::invalid_argument("objective: n must be >= 0");
  PulseSequence tmp("candidate", phases, 1.0);
  const ToggledSequence tog = toggling_phases(tmp);
  const double s = std::sin(gate_sum(phases) - gate_target);
  double u = s * s;
  const double nn = static_cast<double>(phases.size());
  double scale = nn * nn;
  for (int p = 0; p <= n; ++p) {
    u += std::norm(toggled_moment(tog, p)) / scale;
    scale *= nn * nn;
  }
  return u;
}

enum class Pla1Variant { F1, PLA1_2 };
enum class SolutionSign { plus, minus };

/// Closed-form five-pulse solutions of the order-1 criteria.
inline PulseSequence closed_form_pla1(Pla1Variant variant, SolutionSign sign,
                                      double rabi = default_rabi) {
  const double s = (sign == SolutionSign::plus) ? 1.0 : -1.0;
  if (variant == Pla1Variant::F1) {
    const double a = s * std::acos(-0.25);
    return PulseSequence("F1", {-3 * a, -a, 0.0, a, 3 * a}, rabi);
  }
  const double b = s * std::acos((1.0 - 2.0 * std::sqrt(10.0)) / 6.0);
  const double d = -s * std::acos((-2.0 + std::sqrt(10.0)) / 3.0);
  return PulseSequence("PLA1_2",
                       {-b, -2 * b + d, -2 * b + 2 * d, -2 * b + d, -b}, rabi);
}

// -- numerical solver ---------------------------------------------------------

struct SolverConfig {
  int n = 1;             // target criteria order
  int pulses = 5;        // sequence length N (odd)
  int restarts = 64;
  int max_iters = 4000;  // objective evaluations per simplex descent
  double tol = 1e-9;     // residual acceptance threshold
  std::uint64_t seed = 0;
  double gate_angle_target = 0.0;

  void validate() const {
    if (pulses < 3 || pulses % 2 == 0) {
      throw std::invalid_argument("solver: pulse count must be odd and >= 3");
    }
    if (n < 0) throw std::invalid_argument("solver: n must be >= 0");
    if (pulses < n + 2) {
      throw std::invalid_argument("solver: pulse count below heuristic floor");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("solver: tol must be > 0");
    if (restarts < 1) throw std::invalid_argument("solver: restarts must be >= 1");
  }
};

namespace detail {

struct SimplexResult {
  std::vector<double> x;
  double f;
};

template <typename F>
SimplexResult nelder_mead(F&& func, std::vector<double> x0, int max_evals) {
  const size_t dim = x0.size();
  struct Vertex {
    std::vector<double> x;
    double f;
  };
  std::vector<Vertex> simplex(dim + 1);
  simplex[0] = {x0, func(x0)};
  for (size_t i = 0; i < dim; ++i) {
    std::vector<double> x = x0;
    x[i] += 0.5;
    simplex[i + 1] = {x, func(x)};
  }
  int evals = static_cast<int>(dim) + 1;
  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::sort(simplex.begin(), simplex.end(), by_f);

  while (evals < max_evals) {
    if (simplex.back().f - simplex.front().f <
        1e-17 * (1.0 + std::abs(simplex.front().f))) {
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (size_t i = 0; i < dim; ++i) {
      for (size_t v = 0; v < dim; ++v) centroid[i] += simplex[v].x[i];
      centroid[i] /= dim;
    }
    auto along = [&](double t) {
      std::vector<double> x(dim);
      for (size_t i = 0; i < dim; ++i) {
        x[i] = centroid[i] + t * (simplex.back().x[i] - centroid[i]);
      }
      return x;
    };
    const auto xr = along(-1.0);
    const double fr = func(xr);
    ++evals;
    if (fr < simplex.front().f) {
      const auto xe = along(-2.0);
      const double fe = func(xe);
      ++evals;
      simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[dim - 1].f) {
      simplex.back() = {xr, fr};
    } else {
      const bool outside = fr < simplex.back().f;
      const auto xc = along(outside ? -0.5 : 0.5);
      const double fc = func(xc);
      ++evals;
      if (fc < std::min(fr, simplex.back().f)) {
        simplex.back() = {xc, fc};
      } else {
        for (size_t v = 1; v <= dim; ++v) {
          for (size_t i = 0; i < dim; ++i) {
            simplex[v].x[i] =
                simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
          }
          simplex[v].f = func(simplex[v].x);
          ++evals;
        }
      }
    }
    std::sort(simplex.begin(), simplex.end(), by_f);
  }
  return {simplex.front().x, simplex.front().f};
}

// Scaled residual vector of the criteria system and its analytic Jacobian.
inline void residuals_and_jacobian(const std::vector<double>& phases, int n,
                                   double gate_target, Eigen::VectorXd& r,
                                   Eigen::MatrixXd* jac) {
  const int N = static_cast<int>(phases.size());
  const int rows = 1 + 2 * (n + 1);
  r.resize(rows);
  if (jac) jac->setZero(rows, N);

  // toggling phases and their lab-phase derivatives
  std::vector<double> tog(N);
  double alt_sum = 0.0;
  for (int j = 1; j <= N; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    tog[j - 1] = -sign * phases[j - 1] - alt_sum;
    alt_sum += sign * 2.0 * phases[j - 1];
  }
  // d tog_j / d phi_k = -(-1)^j [j==k] - 2 (-1)^k [k<j]
  auto dtog = [&](int j, int k) {
    const double sj = (j % 2 == 0) ? 1.0 : -1.0;
    const double sk = (k % 2 == 0) ? 1.0 : -1.0;
    double d = 0.0;
    if (j == k) d -= sj;
    if (k < j) d -= 2.0 * sk;
    return d;
  };

  const double g = gate_sum(phases) - gate_target;
  r(0) = std::sin(g);
  if (jac) {
    for (int k = 1; k <= N; ++k) {
      (*jac)(0, k - 1) = std::cos(g) * ((k % 2 == 0) ? 1.0 : -1.0);
    }
  }

  double scale = static_cast<double>(N);
  for (int p = 0; p <= n; ++p) {
    cxd sum{0.0, 0.0};
    std::vector<cxd> terms(N);
    for (int l = 1; l <= N; ++l) {
      const double w = (p == 0) ? 1.0 : std::pow(double(l - 1), p);
      terms[l - 1] = w * cxd{std::cos(tog[l - 1]), std::sin(tog[l - 1])};
      sum += terms[l - 1];
    }
    r(1 + 2 * p) = sum.real() / scale;
    r(2 + 2 * p) = sum.imag() / scale;
    if (jac) {
      for (int k = 1; k <= N; ++k) {
        cxd d{0.0, 0.0};
        for (int j = k; j <= N; ++j) {  // dtog is zero for j < k
          d += cxd{0.0, 1.0} * terms[j - 1] * dtog(j, k);
        }
        (*jac)(1 + 2 * p, k - 1) = d.real() / scale;
        (*jac)(2 + 2 * p, k - 1) = d.imag() / scale;
      }
    }
    scale *= N;
  }
}

// Levenberg-Marquardt refinement of a near-solution.
inline std::vector<double> polish(std::vector<double> phases, int n,
                                  double gate_target) {
  const int N = static_cast<int>(phases.size());
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  double lambda = 1e-6;
  residuals_and_jacobian(phases, n, gate_target, r, &jac);
  double cost = r.squaredNorm();
  for (int it = 0; it < 60 && cost > 1e-30; ++it) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    const Eigen::VectorXd step =
        (jtj + lambda * Eigen::MatrixXd::Identity(N, N)).ldlt().solve(-jtr);
    std::vector<double> trial = phases;
    for (int i = 0; i < N; ++i) trial[i] += step(i);
    Eigen::VectorXd r_trial;
    residuals_and_jacobian(trial, n, gate_target, r_trial, nullptr);
    const double trial_cost = r_trial.squaredNorm();
    if (trial_cost < cost) {
      phases = std::move(trial);
      cost = trial_cost;
      lambda = std::max(lambda * 0.3, 1e-12);
      residuals_and_jacobian(phases, n, gate_target, r, &jac);
    } else {
      lambda *= 10.0;
      if (lambda > 1e8) break;
    }
  }
  return phases;
}

}  // namespace detail

/// Multistart simplex descent on the criteria objective with a final
/// least-squares polish. Deterministic for a given config; returns nullopt
/// when no restart reaches the residual threshold (which does not prove
/// non-existence of solutions).
inline std::optional<PulseSequence> solve_pla(const SolverConfig& cfg,
                                              double rabi = default_rabi) {
  cfg.validate();
  const int N = cfg.pulses;
  auto func = [&](const std::vector<double>& x) {
    return objective(x, cfg.n, cfg.gate_angle_target);
  };

  std::vector<double> best;
  double best_f = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<double> x0(N);
    for (int i = 0; i < N; ++i) {
      x0[i] = two_pi * rng::uniform01(rng::key(cfg.seed, restart, 0),
                                      static_cast<std::uint64_t>(i));
    }
    auto res = detail::nelder_mead(func, std::move(x0), cfg.max_iters);
    if (res.f < 1e-4) {
      res.x = detail::polish(res.x, cfg.n, cfg.gate_angle_target);
      res.f = func(res.x);
    }
    if (res.f < best_f) {
      best_f = res.f;
      best = res.x;
    }
  }
  if (best.empty()) return std::nullopt;

  PulseSequence candidate("PLA" + std::to_string(cfg.n) + "_solution", best,
                          rabi);
  const ConstraintReport rep = check_pla(candidate, cfg.n);
  const double gate_dev =
      std::abs(std::sin(gate_sum(candidate.phases()) - cfg.gate_angle_target));
  bool ok = gate_dev <= cfg.tol;
  for (double res : rep.residuals) ok = ok && res <= cfg.tol;
  if (!ok) return std::nullopt;
  return candidate;
}

/// Shifts toggling phases uniformly so the middle pulse sits at zero.
inline ToggledSequence canonical_toggling(const ToggledSequence& tog) {
  ToggledSequence out;
  out.phases.reserve(tog.size());
  const double mid = tog.phases[tog.size() / 2];
  for (double p : tog.phases) out.phases.push_back(wrap_pi(p - mid));
  return out;
}

/// True when two sequences coincide in the toggling frame up to a uniform
/// phase offset, global conjugation (sign flip), and/or time reversal.
inline bool sequences_equivalent(const PulseSequence& a,
                                 const PulseSequence& b, double tol = 1e-6) {
  if (a.size() != b.size()) return false;
  const ToggledSequence ta = toggling_phases(a);
  const ToggledSequence tb = toggling_phases(b);
  const size_t n = ta.size();
  for (bool conj : {false, true}) {
    for (bool rev : {false, true}) {
      std::vector<double> probe(n);
      for (size_t i = 0; i < n; ++i) {
        double v = tb.phases[rev ? n - 1 - i : i];
        if (conj) v = -v;
        probe[i] = v;
      }
      const double offset = circular_diff(ta.phases[0], probe[0]);
      bool match = true;
      for (size_t i = 1; i < n && match; ++i) {
        match = std::abs(circular_diff(ta.phases[i] - probe[i], offset)) <= tol;
      }
      if (match) return true;
    }
  }
  return false;
}

}  // namespace pla
