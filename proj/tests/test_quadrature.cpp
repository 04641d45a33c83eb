#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftc/parser.hpp"
#include "ftc/quadrature.hpp"
#include "support.hpp"

#include <cmath>

using namespace ftc;

TEST_CASE("gauss-jacobi base cases") {
  const auto legendre1 = gauss_jacobi(1, 0);
  CHECK(legendre1.points[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(legendre1.weights[0] == doctest::Approx(2.0));

  const auto legendre2 = gauss_jacobi(2, 0);
  CHECK(legendre2.points[0] == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(legendre2.points[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(legendre2.weights[0] == doctest::Approx(1.0));
  CHECK(legendre2.weights[1] == doctest::Approx(1.0));

  const auto jacobi11 = gauss_jacobi(1, 1);
  CHECK(jacobi11.points[0] == doctest::Approx(-1.0 / 3.0));
  CHECK(jacobi11.weights[0] == doctest::Approx(2.0));

  CHECK_THROWS(gauss_jacobi(0, 0));
  CHECK_THROWS(gauss_jacobi(2, 3));
}

TEST_CASE("gauss-jacobi exactness against the weighted moments") {
  // integral of (1-x)^a x^k over [-1,1]
  auto moment = [](int a, int k) {
    // expand (1-x)^a
    double total = 0.0;
    const double binom[3][3] = {{1, 0, 0}, {1, -1, 0}, {1, -2, 1}};
    for (int j = 0; j <= a; ++j) {
      const int p = k + j;
      const double integral = (p % 2 == 0) ? 2.0 / (p + 1) : 0.0;
      total += binom[a][j] * integral;
    }
    return total;
  };
  for (int a = 0; a <= 2; ++a)
    for (int n = 1; n <= 8; ++n) {
      const auto rule = gauss_jacobi(n, a);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        double q = 0.0;
        for (int i = 0; i < n; ++i) q += rule.weights[static_cast<std::size_t>(i)] * std::pow(rule.points[static_cast<std::size_t>(i)], k);
        CHECK(std::abs(q - moment(a, k)) < 1e-13 * std::max(1.0, std::abs(moment(a, k))));
      }
    }
}

TEST_CASE("simplex rule spot checks") {
  const auto tri0 = simplex_rule(CellType::triangle, 0);
  double total = 0.0;
  for (double w : tri0.weights) total += w;
  CHECK(total == doctest::Approx(0.5).epsilon(1e-14));

  const auto tri3 = simplex_rule(CellType::triangle, 3);
  double ix2y = 0.0;
  for (int k = 0; k < tri3.num_points(); ++k)
    ix2y += tri3.weights[static_cast<std::size_t>(k)] * test::eval_monomial(tri3.points[static_cast<std::size_t>(k)], 2, 1);
  CHECK(std::abs(ix2y - 1.0 / 60.0) < 1e-13);

  const auto tet2 = simplex_rule(CellType::tetrahedron, 2);
  double ixy = 0.0;
  for (int k = 0; k < tet2.num_points(); ++k)
    ixy += tet2.weights[static_cast<std::size_t>(k)] * test::eval_monomial(tet2.points[static_cast<std::size_t>(k)], 1, 1);
  CHECK(std::abs(ixy - 1.0 / 120.0) < 1e-13);
}

TEST_CASE("monomial exactness sweep to degree 12") {
  for (CellType cell : {CellType::interval, CellType::triangle, CellType::tetrahedron}) {
    const int d = cell_dimension(cell);
    for (int p = 0; p <= 12; ++p) {
      const auto rule = simplex_rule(cell, p);
      for (int a = 0; a <= p; ++a)
        for (int b = 0; b <= (d >= 2 ? p - a : 0); ++b)
          for (int c = 0; c <= (d >= 3 ? p - a - b : 0); ++c) {
            double q = 0.0;
            for (int k = 0; k < rule.num_points(); ++k)
              q += rule.weights[static_cast<std::size_t>(k)] *
                   test::eval_monomial(rule.points[static_cast<std::size_t>(k)], a, b, c);
            const double exact = test::exact_monomial_integral(d, a, b, c);
            CHECK(std::abs(q - exact) < 1e-12 * exact);
          }
    }
  }
}

TEST_CASE("rule structure invariants") {
  const ReferenceCell tri(CellType::triangle), tet(CellType::tetrahedron), iv(CellType::interval);
  for (const auto* cellp : {&iv, &tri, &tet}) {
    for (int p = 0; p <= 12; ++p) {
      const auto rule = simplex_rule(cellp->type(), p);
      double total = 0.0;
      for (double w : rule.weights) {
        CHECK(w > 0.0);
        total += w;
      }
      CHECK(std::abs(total - cellp->volume()) < 1e-13);
      for (const Point& pt : rule.points) {
        double bary = 0.0;
        for (int k = 0; k < cellp->dimension(); ++k) {
          CHECK(pt[static_cast<std::size_t>(k)] >= 0.0);
          CHECK(pt[static_cast<std::size_t>(k)] <= 1.0);
          bary += pt[static_cast<std::size_t>(k)];
        }
        CHECK(bary <= 1.0 + 1e-14);
      }
    }
  }
}

TEST_CASE("raising the degree never hurts a fixed integrand") {
  // degree-3 integrand x^2 y, exact for all rules with p >= 3
  for (int p = 3; p <= 12; ++p) {
    const auto rule = simplex_rule(CellType::triangle, p);
    double q = 0.0;
    for (int k = 0; k < rule.num_points(); ++k)
      q += rule.weights[static_cast<std::size_t>(k)] * test::eval_monomial(rule.points[static_cast<std::size_t>(k)], 2, 1);
    CHECK(std::abs(q - 1.0 / 60.0) < 1e-12 / 60.0);
  }
}

TEST_CASE("required integrand degree per monomial") {
  const std::string mass = "element = Lagrange(1, triangle)\narguments = v, u\na = v*u*dx\n";
  const Form fm = parse_form(mass);
  CHECK(required_degree(fm.monomials[0], 1) == 2);

  const std::string poisson = "element = Lagrange(2, triangle)\narguments = v, u\na = v.dx(i)*u.dx(i)*dx\n";
  const Form fp = parse_form(poisson);
  CHECK(required_degree(fp.monomials[0], 2) == 2);

  const std::string ns = "element = Lagrange(1, tetrahedron, 3)\narguments = v, u\ncoefficients = w\n"
                         "a = v[i]*w[j]*u[i].dx(j)*dx\n";
  const Form fn = parse_form(ns);
  CHECK(required_degree(fn.monomials[0], 1) == 2);
}
