#pragma once

#include "ftc/lowering.hpp"
#include "ftc/ndarray.hpp"
#include "ftc/quadrature.hpp"
#include "ftc/reference_tensor.hpp"

#include <span>

namespace ftc {

/// Affine map x = v0 + F' X from the reference simplex onto a cell given
/// by its vertices. det is signed by vertex orientation; integration
/// consistently uses |det| so results do not depend on vertex order.
struct AffineMap {
  int dim = 0;
  std::vector<Point> vertices;
  std::array<double, 9> jacobian{};     // F' = dx/dX, row-major d x d
  std::array<double, 9> jacobian_inv{}; // dX/dx
  double det = 0.0;
  double abs_det = 0.0;

  double jac(int r, int c) const { return jacobian[static_cast<std::size_t>(r) * dim + c]; }
  double jinv(int r, int c) const { return jacobian_inv[static_cast<std::size_t>(r) * dim + c]; }
  Point apply(const Point& X) const;
};

/// Throws std::invalid_argument for degenerate vertex sets.
AffineMap affine_map(CellType cell, const std::vector<Point>& vertices);

/// Per-coefficient local expansion vectors, each of element space dimension.
using CoefficientData = std::vector<std::vector<double>>;

/// Numeric geometry tensor over the secondary axes.
NdArray eval_geometry_tensor(const GeometryTensorExpr& expr, std::span<const int> secondary_shape,
                             const AffineMap& map, const CoefficientData& coeffs);

/// Element tensor by contraction over all secondary axes. The flattened
/// and multi-axis views share one summation order and are bitwise equal.
NdArray contract(const ReferenceTensor& a0, const NdArray& geometry);
std::vector<double> contract_flattened(const ReferenceTensor& a0, std::span<const double> geometry_flat);

/// Independent check: evaluate the element tensor directly by numerical
/// quadrature in physical space, from the unlowered form. Shares only
/// basis tabulation with the contraction path. quad_degree < 0 selects the
/// exact per-monomial degree.
NdArray oracle_element_tensor(const Form& form, const AffineMap& map, const CoefficientData& coeffs,
                              int quad_degree = -1);

} // namespace ftc
