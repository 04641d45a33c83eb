#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftc/geometry.hpp"
#include "ftc/mesh.hpp"
#include "ftc/reference_tensor.hpp"
#include "support.hpp"

#include <random>

using namespace ftc;

namespace {

const std::vector<Point> kScaledTriangle = {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}};

NdArray element_tensor_by_contraction(const Form& form, const AffineMap& map,
                                      const CoefficientData& coeffs) {
  const Form s = simplify(form);
  NdArray out(std::vector<int>(static_cast<std::size_t>(s.arity), s.element->space_dimension()));
  for (const Monomial& m : s.monomials) {
    const LoweredMonomial lm = lower(m, s.element);
    const ReferenceTensor a0 = compute_assembled(lm.ref, default_rule(lm.ref)).tensor;
    const NdArray g = eval_geometry_tensor(lm.geometry, lm.ref.secondary_shape(), map, coeffs);
    const NdArray ek = contract(a0, g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += ek[k];
  }
  return out;
}

} // namespace

TEST_CASE("affine map basics") {
  const AffineMap id = affine_map(CellType::triangle, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  CHECK(id.det == doctest::Approx(1.0));
  CHECK(id.jac(0, 0) == doctest::Approx(1.0));
  CHECK(id.jac(0, 1) == doctest::Approx(0.0));

  const AffineMap scaled = affine_map(CellType::triangle, kScaledTriangle);
  CHECK(scaled.det == doctest::Approx(4.0));
  CHECK(scaled.jinv(0, 0) == doctest::Approx(0.5));
  CHECK(scaled.jinv(1, 1) == doctest::Approx(0.5));
  CHECK(scaled.jinv(0, 1) == doctest::Approx(0.0));

  const AffineMap flipped = affine_map(CellType::triangle, {{2, 0, 0}, {0, 0, 0}, {0, 2, 0}});
  CHECK(flipped.det == doctest::Approx(-4.0));
  CHECK(flipped.abs_det == doctest::Approx(4.0));

  CHECK_THROWS_AS(affine_map(CellType::triangle, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}),
                  std::invalid_argument);
  const Point image = scaled.apply({0.5, 0.5, 0});
  CHECK(image[0] == doctest::Approx(1.0));
  CHECK(image[1] == doctest::Approx(1.0));

  // F' Jinv = I on random cells
  std::mt19937_64 rng(3);
  for (CellType cell : {CellType::interval, CellType::triangle, CellType::tetrahedron}) {
    const int d = cell_dimension(cell);
    for (int trial = 0; trial < 10; ++trial) {
      const AffineMap m = affine_map(cell, test::random_cell_vertices(cell, rng));
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          double dot = 0.0;
          for (int k = 0; k < d; ++k) dot += m.jac(r, k) * m.jinv(k, c);
          CHECK(std::abs(dot - (r == c ? 1.0 : 0.0)) < 1e-12);
        }
    }
  }
}

TEST_CASE("geometry tensor evaluation") {
  const Form mass = test::mass_form(CellType::triangle, 1);
  const LoweredMonomial lm = lower(mass.monomials[0], mass.element);
  const AffineMap id = affine_map(CellType::triangle, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  const NdArray g = eval_geometry_tensor(lm.geometry, lm.ref.secondary_shape(), id, {});
  REQUIRE(g.size() == 1);
  CHECK(g[0] == doctest::Approx(1.0));

  // scaling a triangle by 2 is conformally neutral in 2D: det F' times the
  // squared inverse Jacobian gives exactly the identity
  const Form poisson = test::poisson_form(CellType::triangle, 1);
  const LoweredMonomial lp = lower(poisson.monomials[0], poisson.element);
  const AffineMap scaled = affine_map(CellType::triangle, kScaledTriangle);
  const NdArray gp = eval_geometry_tensor(lp.geometry, lp.ref.secondary_shape(), scaled, {});
  REQUIRE(gp.shape() == std::vector<int>{2, 2});
  CHECK(gp.at({0, 0}) == doctest::Approx(1.0));
  CHECK(gp.at({1, 1}) == doctest::Approx(1.0));
  CHECK(gp.at({0, 1}) == doctest::Approx(0.0));
  CHECK(gp.at({1, 0}) == doctest::Approx(0.0));

  // convection: G[dof, component, direction] = |det| w[dof] Jinv[dir, comp]
  std::mt19937_64 rng(5);
  const Form ns = test::navier_stokes_form(CellType::tetrahedron, 1);
  const LoweredMonomial ln = lower(ns.monomials[0], ns.element);
  const AffineMap map = affine_map(CellType::tetrahedron, test::random_cell_vertices(CellType::tetrahedron, rng));
  const CoefficientData w = {test::random_coefficients(12, rng)};
  const NdArray gn = eval_geometry_tensor(ln.geometry, ln.ref.secondary_shape(), map, w);
  for (int dof = 0; dof < 12; ++dof)
    for (int comp = 0; comp < 3; ++comp)
      for (int dir = 0; dir < 3; ++dir)
        CHECK(gn.at({dof, comp, dir}) ==
              doctest::Approx(map.abs_det * w[0][static_cast<std::size_t>(dof)] * map.jinv(dir, comp))
                  .epsilon(1e-13));

  CHECK_THROWS_AS(eval_geometry_tensor(ln.geometry, ln.ref.secondary_shape(), map, {}),
                  std::invalid_argument);
}

TEST_CASE("contraction against hand-computed tensors") {
  const Form mass = test::mass_form(CellType::triangle, 1);
  const LoweredMonomial lm = lower(mass.monomials[0], mass.element);
  const ReferenceTensor a0 = compute_assembled(lm.ref, default_rule(lm.ref)).tensor;

  std::mt19937_64 rng(17);
  const AffineMap map = affine_map(CellType::triangle, test::random_cell_vertices(CellType::triangle, rng));
  const NdArray g = eval_geometry_tensor(lm.geometry, lm.ref.secondary_shape(), map, {});
  const NdArray ek = contract(a0, g);
  for (std::size_t k = 0; k < ek.size(); ++k)
    CHECK(ek[k] == doctest::Approx(map.abs_det * a0.values[k]).epsilon(1e-13));

  // P1 stiffness of the (0,0),(2,0),(0,2) triangle: gradients
  // (-1/2,-1/2),(1/2,0),(0,1/2), area 2
  const Form poisson = test::poisson_form(CellType::triangle, 1);
  const LoweredMonomial lp = lower(poisson.monomials[0], poisson.element);
  const ReferenceTensor p0 = compute_assembled(lp.ref, default_rule(lp.ref)).tensor;
  const AffineMap scaled = affine_map(CellType::triangle, kScaledTriangle);
  const NdArray gp = eval_geometry_tensor(lp.geometry, lp.ref.secondary_shape(), scaled, {});
  const NdArray kp = contract(p0, gp);
  const double expect[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(kp.at({i, j}) - expect[i][j]) < 1e-12);

  // flattened and multi-axis contraction paths agree bitwise
  const std::vector<double> flat =
      contract_flattened(p0, std::span<const double>(gp.data(), gp.size()));
  for (std::size_t k = 0; k < flat.size(); ++k) CHECK(flat[k] == kp[k]);

  NdArray wrong({3});
  CHECK_THROWS_AS(contract(p0, wrong), std::invalid_argument);
}

TEST_CASE("oracle spot values") {
  const Form mass = test::mass_form(CellType::triangle, 1);
  const AffineMap id = affine_map(CellType::triangle, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  const NdArray m = oracle_element_tensor(mass, id, {});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(m.at({i, j}) - (i == j ? 1.0 : 0.5) / 12.0) < 1e-14);
}

TEST_CASE("contraction equals the physical-space oracle on random cells") {
  std::mt19937_64 rng(2024);
  struct Case {
    Form form;
    int n_coeff;
  };
  const std::vector<Case> cases = {
      {test::mass_form(CellType::triangle, 3), 0},
      {test::poisson_form(CellType::triangle, 2), 0},
      {test::poisson_form(CellType::tetrahedron, 2), 0},
      {test::navier_stokes_form(CellType::triangle, 2), 1},
      {test::navier_stokes_form(CellType::tetrahedron, 1), 1},
      {test::elasticity_form(CellType::triangle, 2), 0},
      {test::elasticity_form(CellType::tetrahedron, 1), 0},
      {test::stabilization_form(CellType::tetrahedron, 1), 1},
  };
  for (const Case& c : cases) {
    const CellType cell = c.form.element->cell();
    for (int trial = 0; trial < 5; ++trial) {
      const AffineMap map = affine_map(cell, test::random_cell_vertices(cell, rng));
      CoefficientData coeffs;
      for (int k = 0; k < c.n_coeff; ++k)
        coeffs.push_back(test::random_coefficients(c.form.element->space_dimension(), rng));
      const NdArray via_contraction = element_tensor_by_contraction(c.form, map, coeffs);
      const NdArray via_oracle = oracle_element_tensor(c.form, map, coeffs);
      CHECK(test::rel_diff(via_contraction, via_oracle) < 1e-11);
    }
  }
}

TEST_CASE("one reference tensor serves every cell") {
  std::mt19937_64 rng(31);
  const Form poisson = test::poisson_form(CellType::triangle, 1);
  const LoweredMonomial lp = lower(poisson.monomials[0], poisson.element);
  const ReferenceTensor a0 = compute_assembled(lp.ref, default_rule(lp.ref)).tensor;
  for (int trial = 0; trial < 100; ++trial) {
    const AffineMap map = affine_map(CellType::triangle, test::random_cell_vertices(CellType::triangle, rng));
    const NdArray g = eval_geometry_tensor(lp.geometry, lp.ref.secondary_shape(), map, {});
    const NdArray ek = contract(a0, g);
    const NdArray ref = oracle_element_tensor(poisson, map, {});
    CHECK(test::rel_diff(ek, ref) < 1e-11);
  }
}

TEST_CASE("results are invariant under vertex reordering") {
  std::mt19937_64 rng(77);
  const Form mass = test::mass_form(CellType::triangle, 1);
  const auto verts = test::random_cell_vertices(CellType::triangle, rng);
  const NdArray a = oracle_element_tensor(mass, affine_map(CellType::triangle, verts), {});
  // swap vertices 0 and 1: dof k of the new cell is dof sigma(k) of the old
  const std::vector<Point> swapped = {verts[1], verts[0], verts[2]};
  const NdArray b = oracle_element_tensor(mass, affine_map(CellType::triangle, swapped), {});
  const int sigma[3] = {1, 0, 2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(b.at({i, j}) == doctest::Approx(a.at({sigma[i], sigma[j]})).epsilon(1e-13));
}

TEST_CASE("poisson element tensors are positive semidefinite with constant nullspace") {
  std::mt19937_64 rng(123);
  const Form poisson = test::poisson_form(CellType::triangle, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const AffineMap map = affine_map(CellType::triangle, test::random_cell_vertices(CellType::triangle, rng));
    const NdArray k = oracle_element_tensor(poisson, map, {});
    const int n = k.shape()[0];
    // row sums vanish: constants lie in the kernel
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += k.at({i, j});
      CHECK(std::abs(row) < 1e-12);
    }
    // x' K x >= -1e-10 for random x
    std::uniform_real_distribution<double> u(-1, 1);
    for (int probe = 0; probe < 20; ++probe) {
      std::vector<double> x(static_cast<std::size_t>(n));
      double norm2 = 0.0;
      for (double& v : x) {
        v = u(rng);
        norm2 += v * v;
      }
      double quad = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) quad += x[static_cast<std::size_t>(i)] * k.at({i, j}) * x[static_cast<std::size_t>(j)];
      CHECK(quad >= -1e-10 * norm2);
    }
  }
}

TEST_CASE("mesh parsing and dof maps") {
  const std::string text = "# unit square\n"
                           "vertex 0 0\nvertex 1 0\nvertex 0 1\nvertex 1 1\n"
                           "cell 0 1 2\ncell 1 3 2\n";
  const Mesh mesh = parse_mesh(text);
  CHECK(mesh.dim == 2);
  CHECK(mesh.num_cells() == 2);

  const DofMap p1 = build_dof_map(mesh, FiniteElement(CellType::triangle, 1));
  CHECK(p1.n_global == 4);
  CHECK(p1.cell_dofs[0] == std::vector<int>{0, 1, 2});

  const DofMap p2 = build_dof_map(mesh, FiniteElement(CellType::triangle, 2));
  CHECK(p2.n_global == 4 + 5); // 4 vertices, 5 undirected edges
  // shared edge (1,2) gets one dof from both cells
  CHECK(p2.cell_dofs[0].size() == 6);

  const DofMap v1 = build_dof_map(mesh, FiniteElement(CellType::triangle, 1, 2));
  CHECK(v1.n_global == 8);

  CHECK_THROWS(parse_mesh("vertex 0 0\n"));
  CHECK_THROWS(parse_mesh("vertex 0 0\nvertex 1 0\nvertex 0 1\ncell 0 1 5\n"));
  // dof maps cover degrees 1 and 2 only, on matching dimensions
  CHECK_THROWS_AS(build_dof_map(mesh, FiniteElement(CellType::triangle, 3)), std::invalid_argument);
  CHECK_THROWS_AS(build_dof_map(mesh, FiniteElement(CellType::tetrahedron, 1)), std::invalid_argument);
}

TEST_CASE("assembly sanity on the unit square") {
  const Mesh mesh = parse_mesh("vertex 0 0\nvertex 1 0\nvertex 0 1\nvertex 1 1\n"
                               "cell 0 1 2\ncell 1 3 2\n");
  for (int q : {1, 2}) {
    const Form mass = test::mass_form(CellType::triangle, q);
    const NdArray m = assemble(mesh, mass);
    double total = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) total += m[k];
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  const Form poisson = test::poisson_form(CellType::triangle, 1);
  const NdArray kmat = assemble(mesh, poisson);
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += kmat.at({i, j});
    CHECK(std::abs(row) < 1e-12);
  }

  // a one-cell mesh assembles to exactly the element tensor
  const Mesh one = parse_mesh("vertex 0 0\nvertex 1 0\nvertex 0 1\ncell 0 1 2\n");
  const NdArray assembled = assemble(one, poisson);
  const NdArray element = oracle_element_tensor(
      poisson, affine_map(CellType::triangle, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}), {});
  CHECK(test::max_abs_diff(assembled, element) < 1e-12);

  // load vector of the constant-one linear form integrates to the area
  const Form load = parse_form("element = Lagrange(1, triangle)\narguments = v\na = v*dx\n");
  const NdArray f = assemble(mesh, load);
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) total += f[k];
  CHECK(std::abs(total - 1.0) < 1e-13);

  // vector mass matrix: summing all entries integrates (1,1).(1,1) = d
  const Form vmass = parse_form("element = Lagrange(1, triangle, 2)\narguments = v, u\n"
                                "a = v[i]*u[i]*dx\n");
  const NdArray vm = assemble(mesh, vmass);
  double vtotal = 0.0;
  for (std::size_t k = 0; k < vm.size(); ++k) vtotal += vm[k];
  CHECK(std::abs(vtotal - 2.0) < 1e-12);

  // assembly with a global coefficient vector: convection against a
  // constant field w = e_0 reduces to the directional-derivative form
  const Form conv = parse_form("element = Lagrange(1, triangle, 2)\narguments = v, u\n"
                               "coefficients = w\na = v[i]*w[j]*u[i].dx(j)*dx\n");
  const DofMap vmap = build_dof_map(mesh, *conv.element);
  std::vector<double> wglobal(static_cast<std::size_t>(vmap.n_global), 0.0);
  for (int s = 0; s < 4; ++s) wglobal[static_cast<std::size_t>(s)] = 1.0; // component 0 block
  const NdArray a_conv = assemble(mesh, conv, {wglobal});
  const Form directional = parse_form("element = Lagrange(1, triangle, 2)\narguments = v, u\n"
                                      "a = v[i]*u[i].dx(0)*dx\n");
  const NdArray a_dir = assemble(mesh, directional);
  CHECK(test::max_abs_diff(a_conv, a_dir) < 1e-13);
}
