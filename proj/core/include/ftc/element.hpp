#pragma once

#include "ftc/cell.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ftc {

/// Basis function values at a set of points for one derivative multi-index.
///
/// values is n_points x n_basis, row-major. For vector-valued elements the
/// dofs are component-blocked (all dofs of component 0, then component 1,
/// ...) and the stored value at dof (c, n) is the underlying scalar basis
/// value of n, independent of c; consumers apply the component mask
/// (block(dof) == requested component) where one is needed.
struct TabulatedBasis {
  std::vector<double> values;
  int n_points = 0;
  int n_basis = 0;
  std::vector<int> derivative; // reference directions, 0-based, sorted

  double at(int point, int dof) const { return values[static_cast<std::size_t>(point) * n_basis + dof]; }
};

/// Arbitrary-degree Lagrange element on a reference simplex.
///
/// Nodes are the equispaced lattice {(a/q, b/q, ...) : a + b + ... <= q},
/// ordered colexicographically in the lattice tuple (for degree 1 this is
/// exactly vertex order). The nodal basis is built through an orthonormal
/// polynomial basis on the simplex: the generalized Vandermonde
/// V[node][poly] is inverted once at construction and values/derivatives
/// of the nodal basis are linear combinations of orthonormal-basis
/// values/derivatives, which are evaluated exactly (no finite differences).
///
/// Elements are immutable after construction and safe to share across
/// threads.
class FiniteElement {
public:
  FiniteElement(CellType cell, int degree, int vector_size = 1);

  CellType cell() const { return cell_; }
  int dimension() const { return dim_; }
  int degree() const { return degree_; }
  int vector_size() const { return vector_size_; }

  /// Number of scalar basis functions (one component block).
  int scalar_dimension() const { return scalar_dim_; }
  /// Total number of dofs: vector_size * scalar_dimension.
  int space_dimension() const { return vector_size_ * scalar_dim_; }

  const std::vector<Point>& nodes() const { return nodes_; }

  /// Component block of a dof under component-major numbering.
  int dof_component(int dof) const { return dof / scalar_dim_; }
  /// Scalar basis index of a dof within its block.
  int dof_scalar_index(int dof) const { return dof % scalar_dim_; }

  /// Values of all basis functions at one point; derivative is a list of
  /// 0-based reference directions (empty for plain evaluation). Returned
  /// vector has space_dimension entries, laid out as in TabulatedBasis.
  std::vector<double> eval_basis(const Point& point, const std::vector<int>& derivative = {}) const;

  TabulatedBasis tabulate(const std::vector<Point>& points, const std::vector<int>& derivative = {}) const;

  /// "Lagrange finite element of degree 1 on a triangle", with a vector
  /// prefix and component count for vector-valued elements.
  std::string description() const;

  bool operator==(const FiniteElement& o) const {
    return cell_ == o.cell_ && degree_ == o.degree_ && vector_size_ == o.vector_size_;
  }

private:
  CellType cell_;
  int dim_;
  int degree_;
  int vector_size_;
  int scalar_dim_;
  std::vector<Point> nodes_;
  // dual_coeffs_[i*scalar_dim_+m]: coefficient of orthonormal poly m in nodal basis i
  std::vector<double> dual_coeffs_;
};

/// Equispaced lattice nodes of the degree-q Lagrange element, in the
/// documented colex order.
std::vector<Point> lagrange_nodes(CellType cell, int degree);

using ElementPtr = std::shared_ptr<const FiniteElement>;

inline ElementPtr make_element(CellType cell, int degree, int vector_size = 1) {
  return std::make_shared<const FiniteElement>(cell, degree, vector_size);
}

} // namespace ftc
