#include "ftc/quadrature.hpp"

#include "ftc/form.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace ftc {

GaussJacobiRule gauss_jacobi(int n, int alpha) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  if (alpha < 0 || alpha > 2) throw std::invalid_argument("gauss_jacobi: alpha must be in {0,1,2}");
  const double a = alpha, b = 0.0;

  // Symmetric tridiagonal Jacobi matrix for weight (1-x)^a on [-1,1].
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  diag(0) = (b - a) / (a + b + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
    const double beta =
        4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(beta);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(n - 1, 0)),
                            Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_jacobi: tridiagonal eigensolver failed to converge");

  const double mu0 = std::pow(2.0, a + b + 1.0) / (a + b + 1.0); // integral of (1-x)^a
  GaussJacobiRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.points[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

QuadratureRule simplex_rule(CellType cell, int p) {
  if (p < 0) throw std::invalid_argument("simplex_rule: degree must be >= 0");
  const int n = (p + 2) / 2; // ceil((p+1)/2)
  QuadratureRule rule;
  rule.cell = cell;
  rule.degree = p;

  const GaussJacobiRule g0 = gauss_jacobi(n, 0);
  switch (cell) {
  case CellType::interval: {
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({0.5 * (g0.points[i] + 1.0), 0.0, 0.0});
      rule.weights.push_back(0.5 * g0.weights[i]);
    }
    break;
  }
  case CellType::triangle: {
    const GaussJacobiRule g1 = gauss_jacobi(n, 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double y = 0.5 * (g1.points[j] + 1.0);
        const double x = (1.0 - y) * 0.5 * (g0.points[i] + 1.0);
        rule.points.push_back({x, y, 0.0});
        rule.weights.push_back(g0.weights[i] * g1.weights[j] / 8.0);
      }
    break;
  }
  case CellType::tetrahedron: {
    const GaussJacobiRule g1 = gauss_jacobi(n, 1);
    const GaussJacobiRule g2 = gauss_jacobi(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double z = 0.5 * (g2.points[k] + 1.0);
          const double y = (1.0 - z) * 0.5 * (g1.points[j] + 1.0);
          const double x = (1.0 - y - z) * 0.5 * (g0.points[i] + 1.0);
          rule.points.push_back({x, y, z});
          rule.weights.push_back(g0.weights[i] * g1.weights[j] * g2.weights[k] / 64.0);
        }
    break;
  }
  }
  return rule;
}

int required_degree(const Monomial& monomial, int element_degree) {
  int degree = 0;
  for (const Factor& f : monomial.factors)
    degree += std::max(element_degree - static_cast<int>(f.derivatives.size()), 0);
  return degree;
}

} // namespace ftc
