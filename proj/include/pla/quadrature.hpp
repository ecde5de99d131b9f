#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pla {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Integrates f over [a, b] with a composite Gauss-Legendre rule.
template <typename F>
double integrate(F&& f, double a, double b, int order = 48, int panels = 1) {
  static thread_local int cached_order = -1;
  static thread_local QuadratureRule cached;
  if (order != cached_order) {
    cached = gauss_legendre(order);
    cached_order = order;
  }
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    const double half = 0.5 * h;
    double s = 0.0;
    for (int i = 0; i < order; ++i) {
      s += cached.weights[i] * f(mid + half * cached.nodes[i]);
    }
    total += s * half;
  }
  return total;
}

/// Gauss-Hermite rule for integrals of f(x) exp(-x^2) over the real line,
/// via the Golub-Welsch eigenvalue method on the Jacobi matrix.
inline QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(k / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::sqrt(M_PI);  // integral of exp(-x^2)
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v = eig.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  return rule;
}

/// Expectation of f(x) for x ~ Normal(0, sigma^2) by Gauss-Hermite quadrature.
template <typename F>
double gaussian_expectation(F&& f, double sigma, int order) {
  const QuadratureRule rule = gauss_hermite(order);
  const double scale = std::sqrt(2.0) * sigma;
  double s = 0.0;
  for (int i = 0; i < order; ++i) {
    s += rule.weights[i] * f(scale * rule.nodes[i]);
  }
  return s / std::sqrt(M_PI);
}

}  // namespace pla
