#pragma once

#include "ftc/cell.hpp"

#include <array>
#include <vector>

namespace ftc::polyset {

/// Number of polynomials of total degree <= n on a d-simplex.
int dim(CellType cell, int n);

/// Tabulate the orthonormal (collapsed-coordinate) polynomial basis of
/// total degree <= n on the reference simplex, differentiated `deriv[v]`
/// times in each coordinate direction v. Output is [poly][point],
/// row-major, size dim(cell, n) * points.size().
///
/// Values and derivatives are produced by recurrence relations
/// differentiated term-by-term, so derivatives of any order are exact
/// for polynomials (orders beyond the degree come out as exact zeros).
std::vector<double> tabulate(CellType cell, int n, std::array<int, 3> deriv,
                             const std::vector<Point>& points);

} // namespace ftc::polyset
