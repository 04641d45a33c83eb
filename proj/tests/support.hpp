#pragma once

#include "ftc/cell.hpp"
#include "ftc/geometry.hpp"
#include "ftc/parser.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ftc::test {

// The benchmark forms, parameterized over cell and degree.
inline std::string element_line(CellType cell, int q, bool vector) {
  std::string s = "element = Lagrange(" + std::to_string(q) + ", " + cell_name(cell);
  if (vector) s += ", " + std::to_string(cell_dimension(cell));
  return s + ")\n";
}

inline Form mass_form(CellType cell, int q) {
  return parse_form(element_line(cell, q, false) + "arguments = v, u\na = v*u*dx\n");
}

inline Form poisson_form(CellType cell, int q) {
  return parse_form(element_line(cell, q, false) + "arguments = v, u\na = v.dx(i)*u.dx(i)*dx\n");
}

inline Form navier_stokes_form(CellType cell, int q) {
  return parse_form(element_line(cell, q, true) +
                    "arguments = v, u\ncoefficients = w\na = v[i]*w[j]*u[i].dx(j)*dx\n");
}

inline Form elasticity_form(CellType cell, int q) {
  return parse_form(element_line(cell, q, true) +
                    "arguments = v, u\n"
                    "a = 0.25*(v[i].dx(j) + v[j].dx(i)) * (u[i].dx(j) + u[j].dx(i)) * dx\n");
}

inline Form stabilization_form(CellType cell, int q) {
  return parse_form(element_line(cell, q, true) +
                    "arguments = v, u\ncoefficients = w\na = w[j]*v[i].dx(j)*w[k]*u[i].dx(k)*dx\n");
}

// Exact integral of x^a y^b z^c over the unit reference simplex:
// a! b! c! / (a + b + c + d)!
inline double exact_monomial_integral(int dim, int a, int b = 0, int c = 0) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  };
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + dim);
}

inline double eval_monomial(const Point& p, int a, int b = 0, int c = 0) {
  return std::pow(p[0], a) * std::pow(p[1], b) * std::pow(p[2], c);
}

// Uniform point in the open reference simplex.
inline Point random_interior_point(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (;;) {
    Point p{0, 0, 0};
    double s = 0;
    for (int k = 0; k < dim; ++k) s += (p[static_cast<std::size_t>(k)] = u(rng));
    if (s < 0.95) return p;
  }
}

// Non-degenerate random affine image of the reference simplex.
inline std::vector<Point> random_cell_vertices(CellType cell, std::mt19937_64& rng) {
  const int d = cell_dimension(cell);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<Point> v(static_cast<std::size_t>(d) + 1, Point{0, 0, 0});
    for (auto& p : v)
      for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = u(rng);
    // spread vertex k+1 along axis k so the cell cannot collapse
    for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(k)] += 2.0;
    try {
      const AffineMap m = affine_map(cell, v);
      if (m.abs_det > 0.2) return v;
    } catch (const std::exception&) {
    }
  }
}

inline std::vector<double> random_coefficients(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = u(rng);
  return w;
}

inline double max_abs_diff(const NdArray& a, const NdArray& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double rel_diff(const NdArray& a, const NdArray& b) {
  const double scale = std::max(a.max_abs(), b.max_abs());
  if (scale == 0.0) return 0.0;
  return max_abs_diff(a, b) / scale;
}

} // namespace ftc::test
