#pragma once

#include "ftc/cell.hpp"

#include <vector>

namespace ftc {

/// Quadrature rule on a reference simplex, exact for total polynomial
/// degree at least `degree`.
struct QuadratureRule {
  CellType cell;
  int degree = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  int num_points() const { return static_cast<int>(points.size()); }
};

/// One-dimensional Gauss-Jacobi rule on [-1,1] with weight (1-x)^a.
/// Nodes are the eigenvalues of the symmetric Jacobi recurrence matrix,
/// weights come from the squared first eigenvector components scaled by
/// the zeroth moment (Golub-Welsch). Nodes are returned in ascending
/// order. Throws on eigensolver failure.
struct GaussJacobiRule {
  std::vector<double> points;
  std::vector<double> weights;
};
GaussJacobiRule gauss_jacobi(int n, int alpha);

/// Collapsed-coordinate rule on the reference simplex: a tensor product
/// of n = ceil((p+1)/2) Gauss-Jacobi points per direction mapped through
/// the collapsing (Duffy) transformation, with the Jacobi weights
/// (alpha = 1 for the second triangle direction, alpha = 1 and 2 for
/// the tetrahedron) absorbing the collapse Jacobian. Point order is
/// lexicographic in the per-direction indices.
QuadratureRule simplex_rule(CellType cell, int p);

struct Monomial; // form IR

/// Total polynomial degree of the reference-cell integrand of a monomial:
/// sum over factors of max(q_j - |derivatives_j|, 0).
int required_degree(const Monomial& monomial, int element_degree);

} // namespace ftc
