#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftc/form.hpp"
#include "ftc/parser.hpp"
#include "support.hpp"

using namespace ftc;

TEST_CASE("mass form parses to one two-factor monomial") {
  const Form f = test::mass_form(CellType::triangle, 1);
  REQUIRE(f.monomials.size() == 1);
  const Monomial& m = f.monomials[0];
  REQUIRE(m.factors.size() == 2);
  CHECK(m.constant.is_one());
  CHECK(!m.factors[0].is_coefficient);
  CHECK(m.factors[0].function == 0);
  CHECK(m.factors[1].function == 1);
  CHECK(!m.factors[0].component);
  CHECK(m.factors[0].derivatives.empty());
  // only the two primary indices
  for (const Index& ix : m.indices) CHECK(ix.kind == IndexKind::primary);
}

TEST_CASE("poisson derivatives share one summation index") {
  const Form f = test::poisson_form(CellType::triangle, 1);
  REQUIRE(f.monomials.size() == 1);
  const Monomial& m = f.monomials[0];
  REQUIRE(m.factors[0].derivatives.size() == 1);
  REQUIRE(m.factors[1].derivatives.size() == 1);
  CHECK(m.factors[0].derivatives[0] == m.factors[1].derivatives[0]);
  const Index& i = m.index(m.factors[0].derivatives[0]);
  CHECK(i.kind == IndexKind::summation);
  CHECK(i.range == 2);
}

TEST_CASE("elasticity expands to four quarter-weighted monomials") {
  const Form f = test::elasticity_form(CellType::tetrahedron, 1);
  REQUIRE(f.monomials.size() == 4);
  for (const Monomial& m : f.monomials) CHECK(m.constant == Rational(1, 4));

  const Form s = simplify(f);
  REQUIRE(s.monomials.size() == 2);
  for (const Monomial& m : s.monomials) CHECK(m.constant == Rational(1, 2));
}

TEST_CASE("simplify merges renamed duplicates and drops zeros") {
  const std::string base = "element = Lagrange(1, triangle)\narguments = v, u\n";
  const Form dup = parse_form(base + "a = v.dx(i)*u.dx(i)*dx + u.dx(j)*v.dx(j)*dx\n");
  REQUIRE(dup.monomials.size() == 2);
  CHECK(simplify(dup).monomials.size() == 1);
  CHECK(simplify(dup).monomials[0].constant == Rational(2));

  const Form zero = parse_form(base + "a = v*u*dx + 0*v*u*dx\n");
  CHECK(simplify(zero).monomials.size() == 1);
  CHECK(simplify(zero).monomials[0].constant.is_one());

  const Form cancel = parse_form(base + "a = v*u*dx - v*u*dx\n");
  CHECK(simplify(cancel).monomials.empty());

  // fixed point
  const Form p = test::poisson_form(CellType::triangle, 2);
  const Form s1 = simplify(p), s2 = simplify(s1);
  CHECK(s1.monomials.size() == 1);
  CHECK(canonically_equal(s1, s2));
}

TEST_CASE("print/parse round trip is canonical identity") {
  const std::vector<Form> corpus = {
      test::mass_form(CellType::triangle, 1),
      test::poisson_form(CellType::tetrahedron, 2),
      test::navier_stokes_form(CellType::tetrahedron, 1),
      test::elasticity_form(CellType::triangle, 2),
      test::stabilization_form(CellType::tetrahedron, 1),
  };
  for (const Form& f : corpus) {
    const Form again = parse_form(print_form(f));
    CHECK(canonically_equal(f, again));
    const Form s = simplify(f);
    if (!s.monomials.empty()) CHECK(canonically_equal(s, parse_form(print_form(s))));
  }
}

TEST_CASE("constants parse exactly") {
  const std::string base = "element = Lagrange(1, triangle)\narguments = v, u\n";
  CHECK(parse_form(base + "a = 0.25*v*u*dx\n").monomials[0].constant == Rational(1, 4));
  CHECK(parse_form(base + "a = 1/2*v*u*dx\n").monomials[0].constant == Rational(1, 2));
  CHECK(parse_form(base + "a = -v*u*dx\n").monomials[0].constant == Rational(-1));
  CHECK(parse_form(base + "a = 2*3*v*u*dx\n").monomials[0].constant == Rational(6));
}

TEST_CASE("parse errors carry locations and clear messages") {
  const std::string base = "element = Lagrange(1, triangle)\narguments = v, u\n";
  auto message_of = [](auto&& thunk) {
    try {
      thunk();
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };

  CHECK(message_of([&] { parse_form(base + "a = v*z*dx\n"); }).find("unknown identifier 'z'") !=
        std::string::npos);
  CHECK(message_of([&] { parse_form(base + "a = v*v*dx\n"); }).find("not multilinear") !=
        std::string::npos);
  CHECK(message_of([&] { parse_form(base + "a = v*dx\n"); }).find("not multilinear") !=
        std::string::npos); // u missing
  CHECK(message_of([&] { parse_form(base + "a = v*u\n"); }).find("missing the measure") !=
        std::string::npos);
  CHECK(message_of([&] { parse_form(base + "a = v*u*dx*dx\n"); }).find("more than one measure") !=
        std::string::npos);
  CHECK(message_of([&] { parse_form(base + "a = v.dx(i)*u*dx\n"); }).find("exactly twice") !=
        std::string::npos);
  CHECK(message_of([&] { parse_form(base + "a = v.dx(5)*u.dx(5)*dx\n"); }).find("out of range") !=
        std::string::npos);
  CHECK(message_of([&] { parse_form(base + "a = v[0]*u*dx\n"); }).find("scalar") != std::string::npos);
  CHECK(message_of([&] { parse_form(base + "a = v.dy(i)*u*dx\n"); }).find("expected 'dx'") !=
        std::string::npos);

  // vector-valued functions need components
  const std::string vbase = "element = Lagrange(1, triangle, 2)\narguments = v, u\n";
  CHECK(message_of([&] { parse_form(vbase + "a = v*u[0]*dx\n"); }).find("without a component") !=
        std::string::npos);

  try {
    parse_form(base + "a = v*u*\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("element declaration errors") {
  CHECK_THROWS_AS(parse_form("element = Hermite(3, triangle)\narguments = v\na = v*dx\n"), ParseError);
  CHECK_THROWS_AS(parse_form("element = Lagrange(1, square)\narguments = v\na = v*dx\n"), ParseError);
  CHECK_THROWS_AS(parse_form("arguments = v\na = v*dx\n"), ParseError); // no element
  CHECK_THROWS_AS(parse_form("element = Lagrange(1, triangle)\na = v*dx\n"), ParseError);
}

TEST_CASE("simplify preserves the evaluated element tensor") {
  std::mt19937_64 rng(61);
  const Form four_terms = test::elasticity_form(CellType::triangle, 1);
  const Form two_terms = simplify(four_terms);
  REQUIRE(two_terms.monomials.size() == 2);
  for (int trial = 0; trial < 5; ++trial) {
    const AffineMap map =
        affine_map(CellType::triangle, test::random_cell_vertices(CellType::triangle, rng));
    const NdArray a = oracle_element_tensor(four_terms, map, {});
    const NdArray b = oracle_element_tensor(two_terms, map, {});
    CHECK(test::rel_diff(a, b) < 1e-12);
  }
}

TEST_CASE("element override re-instantiates vector sizes") {
  const std::string src = "element = Lagrange(1, tetrahedron, 3)\narguments = v, u\ncoefficients = w\n"
                          "a = v[i]*w[j]*u[i].dx(j)*dx\n";
  ElementOverride ov;
  ov.cell = CellType::triangle;
  ov.degree = 2;
  const Form f = parse_form(src, ov);
  CHECK(f.element->cell() == CellType::triangle);
  CHECK(f.element->degree() == 2);
  CHECK(f.element->vector_size() == 2);
}
