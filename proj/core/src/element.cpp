#include "ftc/element.hpp"

#include "polyset.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace ftc {

namespace {

std::array<int, 3> derivative_counts(const std::vector<int>& derivative, int dim) {
  std::array<int, 3> k{0, 0, 0};
  for (int dir : derivative) {
    if (dir < 0 || dir >= dim)
      throw std::out_of_range("derivative direction " + std::to_string(dir) +
                              " out of range for dimension " + std::to_string(dim));
    ++k[dir];
  }
  return k;
}

} // namespace

std::vector<Point> lagrange_nodes(CellType cell, int degree) {
  if (degree < 1) throw std::invalid_argument("Lagrange degree must be >= 1");
  const int d = cell_dimension(cell);
  std::vector<Point> nodes;
  const double q = degree;
  // Lattice tuples (a, b, c), a+b+c <= degree, last coordinate slowest;
  // for degree 1 this enumerates the vertices in their natural order.
  if (d == 1) {
    for (int a = 0; a <= degree; ++a) nodes.push_back({a / q, 0.0, 0.0});
  } else if (d == 2) {
    for (int b = 0; b <= degree; ++b)
      for (int a = 0; a <= degree - b; ++a) nodes.push_back({a / q, b / q, 0.0});
  } else {
    for (int c = 0; c <= degree; ++c)
      for (int b = 0; b <= degree - c; ++b)
        for (int a = 0; a <= degree - b - c; ++a) nodes.push_back({a / q, b / q, c / q});
  }
  return nodes;
}

FiniteElement::FiniteElement(CellType cell, int degree, int vector_size)
    : cell_(cell), dim_(cell_dimension(cell)), degree_(degree), vector_size_(vector_size) {
  if (degree < 1) throw std::invalid_argument("Lagrange degree must be >= 1");
  if (vector_size != 1 && vector_size != dim_)
    throw std::invalid_argument("vector_size must be 1 or the cell dimension");
  nodes_ = lagrange_nodes(cell, degree);
  scalar_dim_ = static_cast<int>(nodes_.size());

  // Generalized Vandermonde V[node][poly] and its factorization: the nodal
  // basis is N_i = sum_m C[i][m] phi_m with C = V^{-T}.
  const std::vector<double> vtab = polyset::tabulate(cell_, degree_, {0, 0, 0}, nodes_);
  Eigen::MatrixXd V(scalar_dim_, scalar_dim_);
  for (int m = 0; m < scalar_dim_; ++m)
    for (int i = 0; i < scalar_dim_; ++i)
      V(i, m) = vtab[static_cast<std::size_t>(m) * scalar_dim_ + i];
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(V.transpose());
  Eigen::MatrixXd C = lu.inverse();
  dual_coeffs_.resize(static_cast<std::size_t>(scalar_dim_) * scalar_dim_);
  for (int i = 0; i < scalar_dim_; ++i)
    for (int m = 0; m < scalar_dim_; ++m)
      dual_coeffs_[static_cast<std::size_t>(i) * scalar_dim_ + m] = C(i, m);
}

TabulatedBasis FiniteElement::tabulate(const std::vector<Point>& points,
                                       const std::vector<int>& derivative) const {
  const auto k = derivative_counts(derivative, dim_);
  const std::vector<double> ptab = polyset::tabulate(cell_, degree_, k, points);
  const int npts = static_cast<int>(points.size());
  const int nb = space_dimension();

  TabulatedBasis tb;
  tb.n_points = npts;
  tb.n_basis = nb;
  tb.derivative = derivative;
  std::sort(tb.derivative.begin(), tb.derivative.end());
  tb.values.assign(static_cast<std::size_t>(npts) * nb, 0.0);
  for (int pt = 0; pt < npts; ++pt) {
    for (int i = 0; i < scalar_dim_; ++i) {
      double v = 0.0;
      const double* c = dual_coeffs_.data() + static_cast<std::size_t>(i) * scalar_dim_;
      for (int m = 0; m < scalar_dim_; ++m) v += c[m] * ptab[static_cast<std::size_t>(m) * npts + pt];
      for (int block = 0; block < vector_size_; ++block)
        tb.values[static_cast<std::size_t>(pt) * nb + block * scalar_dim_ + i] = v;
    }
  }
  return tb;
}

std::vector<double> FiniteElement::eval_basis(const Point& point,
                                              const std::vector<int>& derivative) const {
  return tabulate({point}, derivative).values;
}

std::string FiniteElement::description() const {
  const std::string article = cell_ == CellType::interval ? "an" : "a";
  std::string s = "Lagrange finite element of degree " + std::to_string(degree_) + " on " + article +
                  " " + cell_name(cell_);
  if (vector_size_ > 1)
    s = "Vector " + s + " (" + std::to_string(vector_size_) + " components)";
  return s;
}

} // namespace ftc
