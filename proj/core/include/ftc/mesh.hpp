#pragma once

#include "ftc/form.hpp"
#include "ftc/geometry.hpp"
#include "ftc/ndarray.hpp"

#include <array>
#include <string>
#include <vector>

namespace ftc {

/// Desk-scale simplicial mesh: `vertex x y [z]` and `cell i j k [l]`
/// lines, 0-based vertex indices, plain text.
struct Mesh {
  CellType cell_type = CellType::triangle;
  int dim = 0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 4>> cells;

  int num_cells() const { return static_cast<int>(cells.size()); }
  std::vector<Point> cell_vertices(int c) const;
};

Mesh load_mesh(const std::string& path);
Mesh parse_mesh(const std::string& text);

/// Global numbering for Lagrange q in {1,2}: vertex dofs, then one dof per
/// undirected edge (q = 2), vector components blocked component-major.
struct DofMap {
  int n_global = 0;
  int n_local = 0;
  std::vector<std::vector<int>> cell_dofs;
};

DofMap build_dof_map(const Mesh& mesh, const FiniteElement& element);

/// Dense assembly of the form over the mesh: rank-2 forms give an
/// n_global x n_global matrix, rank-1 a vector. Coefficients are given as
/// global dof vectors and restricted per cell through the dof map. The
/// reference tensor of each monomial is computed once and reused for
/// every cell.
NdArray assemble(const Mesh& mesh, const Form& form,
                 const std::vector<std::vector<double>>& global_coefficients = {});

} // namespace ftc
