#include "ftc/mesh.hpp"

#include "ftc/lowering.hpp"
#include "ftc/reference_tensor.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ftc {

std::vector<Point> Mesh::cell_vertices(int c) const {
  std::vector<Point> out;
  for (int k = 0; k <= dim; ++k)
    out.push_back(vertices[static_cast<std::size_t>(cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)])]);
  return out;
}

Mesh parse_mesh(const std::string& text) {
  Mesh mesh;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  int cell_size = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "vertex") {
      Point p{0, 0, 0};
      int n = 0;
      double v;
      while (ls >> v) {
        if (n >= 3) throw std::runtime_error("mesh line " + std::to_string(lineno) + ": too many coordinates");
        p[static_cast<std::size_t>(n++)] = v;
      }
      if (n < 1) throw std::runtime_error("mesh line " + std::to_string(lineno) + ": vertex needs coordinates");
      if (mesh.dim == 0) mesh.dim = n;
      else if (mesh.dim != n)
        throw std::runtime_error("mesh line " + std::to_string(lineno) + ": inconsistent vertex dimension");
      mesh.vertices.push_back(p);
    } else if (kw == "cell") {
      std::array<int, 4> c{-1, -1, -1, -1};
      int n = 0, v = 0;
      while (ls >> v) {
        if (n >= 4) throw std::runtime_error("mesh line " + std::to_string(lineno) + ": too many cell vertices");
        if (v < 0 || v >= static_cast<int>(mesh.vertices.size()))
          throw std::runtime_error("mesh line " + std::to_string(lineno) + ": vertex index out of range");
        c[static_cast<std::size_t>(n++)] = v;
      }
      if (cell_size == 0) cell_size = n;
      else if (cell_size != n)
        throw std::runtime_error("mesh line " + std::to_string(lineno) + ": inconsistent cell size");
      mesh.cells.push_back(c);
    } else {
      throw std::runtime_error("mesh line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
    }
  }
  if (mesh.vertices.empty() || mesh.cells.empty()) throw std::runtime_error("mesh has no vertices or cells");
  if (cell_size != mesh.dim + 1)
    throw std::runtime_error("mesh cells have " + std::to_string(cell_size) + " vertices, expected " +
                             std::to_string(mesh.dim + 1));
  mesh.cell_type = mesh.dim == 1 ? CellType::interval
                 : mesh.dim == 2 ? CellType::triangle
                                 : CellType::tetrahedron;
  return mesh;
}

Mesh load_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open mesh file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_mesh(ss.str());
}

DofMap build_dof_map(const Mesh& mesh, const FiniteElement& element) {
  if (element.degree() > 2)
    throw std::invalid_argument("dof maps are provided for degree 1 and 2 only");
  if (cell_dimension(element.cell()) != mesh.dim)
    throw std::invalid_argument("element and mesh dimensions differ");
  const int q = element.degree();
  const int nv = static_cast<int>(mesh.vertices.size());

  // global edges (q = 2): sorted vertex pairs, numbered lexicographically
  std::map<std::pair<int, int>, int> edge_ids;
  if (q == 2) {
    for (const auto& c : mesh.cells)
      for (int a = 0; a <= mesh.dim; ++a)
        for (int b = a + 1; b <= mesh.dim; ++b) {
          const int va = c[static_cast<std::size_t>(a)], vb = c[static_cast<std::size_t>(b)];
          edge_ids.emplace(std::minmax(va, vb), 0);
        }
    int next = 0;
    for (auto& [edge, id] : edge_ids) id = next++;
  }
  const int n_scalar = nv + static_cast<int>(edge_ids.size());

  DofMap dm;
  dm.n_local = element.space_dimension();
  dm.n_global = element.vector_size() * n_scalar;

  const auto& nodes = element.nodes();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    std::vector<int> scalar_dofs;
    for (const Point& node : nodes) {
      // integer lattice barycentrics of the node
      std::vector<int> lam(static_cast<std::size_t>(mesh.dim) + 1, 0);
      int sum = 0;
      for (int k = 0; k < mesh.dim; ++k) {
        lam[static_cast<std::size_t>(k) + 1] =
            static_cast<int>(std::lround(node[static_cast<std::size_t>(k)] * q));
        sum += lam[static_cast<std::size_t>(k) + 1];
      }
      lam[0] = q - sum;
      std::vector<int> support;
      for (int k = 0; k <= mesh.dim; ++k)
        if (lam[static_cast<std::size_t>(k)] > 0) support.push_back(k);
      const auto& cv = mesh.cells[static_cast<std::size_t>(c)];
      if (support.size() == 1) {
        scalar_dofs.push_back(cv[static_cast<std::size_t>(support[0])]);
      } else if (support.size() == 2 && q == 2) {
        const auto key = std::minmax(cv[static_cast<std::size_t>(support[0])],
                                     cv[static_cast<std::size_t>(support[1])]);
        scalar_dofs.push_back(nv + edge_ids.at(key));
      } else {
        throw std::logic_error("unsupported node location in dof map");
      }
    }
    std::vector<int> dofs;
    for (int comp = 0; comp < element.vector_size(); ++comp)
      for (int s : scalar_dofs) dofs.push_back(comp * n_scalar + s);
    dm.cell_dofs.push_back(std::move(dofs));
  }
  return dm;
}

NdArray assemble(const Mesh& mesh, const Form& form,
                 const std::vector<std::vector<double>>& global_coefficients) {
  if (form.arity < 1 || form.arity > 2)
    throw std::invalid_argument("assemble supports arity 1 and 2");
  if (global_coefficients.size() != form.coefficient_names.size())
    throw std::invalid_argument("assemble: expected " + std::to_string(form.coefficient_names.size()) +
                                " coefficient vectors");

  const DofMap dm = build_dof_map(mesh, *form.element);
  for (const auto& g : global_coefficients)
    if (static_cast<int>(g.size()) != dm.n_global)
      throw std::invalid_argument("assemble: coefficient vector has wrong global size");

  const std::vector<LoweredMonomial> lowered = lower_form(form);
  std::vector<ReferenceTensor> tensors;
  for (const LoweredMonomial& lm : lowered)
    tensors.push_back(compute_assembled(lm.ref, default_rule(lm.ref)).tensor);

  std::vector<int> shape(static_cast<std::size_t>(form.arity), dm.n_global);
  NdArray out(shape);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = affine_map(mesh.cell_type, mesh.cell_vertices(c));
    const std::vector<int>& dofs = dm.cell_dofs[static_cast<std::size_t>(c)];
    CoefficientData coeffs;
    for (const auto& g : global_coefficients) {
      std::vector<double> local(static_cast<std::size_t>(dm.n_local));
      for (int k = 0; k < dm.n_local; ++k) local[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(dofs[static_cast<std::size_t>(k)])];
      coeffs.push_back(std::move(local));
    }
    for (std::size_t mi = 0; mi < lowered.size(); ++mi) {
      const auto sshape = lowered[mi].ref.secondary_shape();
      const NdArray g = eval_geometry_tensor(lowered[mi].geometry, sshape, map, coeffs);
      const NdArray ek = contract(tensors[mi], g);
      if (form.arity == 1) {
        for (int a = 0; a < dm.n_local; ++a)
          out[static_cast<std::size_t>(dofs[static_cast<std::size_t>(a)])] += ek[static_cast<std::size_t>(a)];
      } else {
        for (int a = 0; a < dm.n_local; ++a)
          for (int b = 0; b < dm.n_local; ++b)
            out[static_cast<std::size_t>(dofs[static_cast<std::size_t>(a)]) * dm.n_global +
                static_cast<std::size_t>(dofs[static_cast<std::size_t>(b)])] +=
                ek[static_cast<std::size_t>(a) * dm.n_local + b];
      }
    }
  }
  return out;
}

} // namespace ftc
