#pragma once

#include <array>
#include <string>
#include <vector>

namespace ftc {

enum class CellType { interval, triangle, tetrahedron };

/// A point in reference coordinates. Unused trailing components are zero.
using Point = std::array<double, 3>;

/// Reference simplex with vertices at the origin and the unit vectors.
///
/// The reference cells are fixed once and for all: interval [0,1],
/// triangle {(0,0),(1,0),(0,1)}, tetrahedron {0,e1,e2,e3}. All basis
/// tabulation, quadrature and affine maps in this library refer to them.
class ReferenceCell {
public:
  explicit ReferenceCell(CellType type);

  CellType type() const { return type_; }
  int dimension() const { return dim_; }
  int num_vertices() const { return dim_ + 1; }
  const std::vector<Point>& vertices() const { return vertices_; }

  /// Measure of the cell: 1, 1/2, 1/6 for d = 1, 2, 3.
  double volume() const;

  /// "interval", "triangle" or "tetrahedron".
  std::string name() const;

private:
  CellType type_;
  int dim_;
  std::vector<Point> vertices_;
};

CellType cell_type_from_name(const std::string& name);
int cell_dimension(CellType type);
std::string cell_name(CellType type);

} // namespace ftc
