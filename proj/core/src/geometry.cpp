#include "ftc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ftc {

Point AffineMap::apply(const Point& X) const {
  Point x = vertices[0];
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) x[static_cast<std::size_t>(r)] += jac(r, c) * X[static_cast<std::size_t>(c)];
  return x;
}

AffineMap affine_map(CellType cell, const std::vector<Point>& vertices) {
  const int d = cell_dimension(cell);
  if (static_cast<int>(vertices.size()) != d + 1)
    throw std::invalid_argument("affine_map: expected " + std::to_string(d + 1) + " vertices");
  AffineMap map;
  map.dim = d;
  map.vertices = vertices;
  double scale = 0.0;
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) {
      const double e = vertices[static_cast<std::size_t>(c) + 1][static_cast<std::size_t>(r)] -
                       vertices[0][static_cast<std::size_t>(r)];
      map.jacobian[static_cast<std::size_t>(r) * d + c] = e;
      scale = std::max(scale, std::abs(e));
    }

  auto j = [&](int r, int c) { return map.jacobian[static_cast<std::size_t>(r) * d + c]; };
  double det = 0.0;
  std::array<double, 9> inv{};
  switch (d) {
  case 1:
    det = j(0, 0);
    if (det != 0.0) inv[0] = 1.0 / det;
    break;
  case 2:
    det = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
    if (det != 0.0) {
      inv[0] = j(1, 1) / det;
      inv[1] = -j(0, 1) / det;
      inv[2] = -j(1, 0) / det;
      inv[3] = j(0, 0) / det;
    }
    break;
  default: {
    det = j(0, 0) * (j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1)) -
          j(0, 1) * (j(1, 0) * j(2, 2) - j(1, 2) * j(2, 0)) +
          j(0, 2) * (j(1, 0) * j(2, 1) - j(1, 1) * j(2, 0));
    if (det != 0.0) {
      inv[0] = (j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1)) / det;
      inv[1] = (j(0, 2) * j(2, 1) - j(0, 1) * j(2, 2)) / det;
      inv[2] = (j(0, 1) * j(1, 2) - j(0, 2) * j(1, 1)) / det;
      inv[3] = (j(1, 2) * j(2, 0) - j(1, 0) * j(2, 2)) / det;
      inv[4] = (j(0, 0) * j(2, 2) - j(0, 2) * j(2, 0)) / det;
      inv[5] = (j(0, 2) * j(1, 0) - j(0, 0) * j(1, 2)) / det;
      inv[6] = (j(1, 0) * j(2, 1) - j(1, 1) * j(2, 0)) / det;
      inv[7] = (j(0, 1) * j(2, 0) - j(0, 0) * j(2, 1)) / det;
      inv[8] = (j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0)) / det;
    }
    break;
  }
  }
  double scale_d = 1.0;
  for (int k = 0; k < d; ++k) scale_d *= std::max(scale, 1e-300);
  if (std::abs(det) < 1e-14 * scale_d)
    throw std::invalid_argument("affine_map: degenerate cell (|det F'| too small)");
  map.det = det;
  map.abs_det = std::abs(det);
  map.jacobian_inv = inv;
  return map;
}

NdArray eval_geometry_tensor(const GeometryTensorExpr& expr, std::span<const int> secondary_shape,
                             const AffineMap& map, const CoefficientData& coeffs) {
  for (const auto& [which, pos] : expr.coefficients)
    if (which >= static_cast<int>(coeffs.size()))
      throw std::invalid_argument("missing coefficient vector " + std::to_string(which));

  NdArray g(std::vector<int>(secondary_shape.begin(), secondary_shape.end()));
  const std::uint64_t nA = NdArray::entry_count(secondary_shape);
  const std::uint64_t nOuter = NdArray::entry_count(expr.outer_ranges);
  std::vector<int> alpha(secondary_shape.size(), 0);
  std::vector<int> outer(expr.outer_ranges.size(), 0);
  const double base = expr.constant.to_double() * map.abs_det;

  auto resolve = [&](const GeoSlot& s) {
    switch (s.cls) {
    case GeoSlot::Cls::secondary: return alpha[static_cast<std::size_t>(s.value)];
    case GeoSlot::Cls::outer: return outer[static_cast<std::size_t>(s.value)];
    default: return s.value;
    }
  };

  for (std::uint64_t a = 0; a < nA; ++a) {
    double v = base;
    for (const auto& [which, pos] : expr.coefficients)
      v *= coeffs[static_cast<std::size_t>(which)][static_cast<std::size_t>(alpha[static_cast<std::size_t>(pos)])];
    double jac_sum = expr.jacobian.empty() ? 1.0 : 0.0;
    if (!expr.jacobian.empty()) {
      std::fill(outer.begin(), outer.end(), 0);
      for (std::uint64_t o = 0; o < nOuter; ++o) {
        double prod = 1.0;
        for (const auto& entry : expr.jacobian)
          prod *= map.jinv(resolve(entry.ref), resolve(entry.phys));
        jac_sum += prod;
        if (!expr.outer_ranges.empty()) next_multi_index(outer, expr.outer_ranges);
      }
    }
    g[a] = v * jac_sum;
    if (!secondary_shape.empty()) next_multi_index(alpha, secondary_shape);
  }
  return g;
}

std::vector<double> contract_flattened(const ReferenceTensor& a0, std::span<const double> g) {
  const std::uint64_t nI = a0.primary_size();
  const std::uint64_t nA = a0.secondary_size();
  if (g.size() != nA) throw std::invalid_argument("contract: geometry tensor size mismatch");
  std::vector<double> out(nI, 0.0);
  const double* a = a0.values.data();
  for (std::uint64_t i = 0; i < nI; ++i) {
    double acc = 0.0;
    const double* row = a + i * nA;
    for (std::uint64_t al = 0; al < nA; ++al) acc += row[al] * g[al];
    out[i] = acc;
  }
  return out;
}

NdArray contract(const ReferenceTensor& a0, const NdArray& geometry) {
  for (std::size_t k = static_cast<std::size_t>(a0.num_primary_axes); k < a0.axes.size(); ++k) {
    const std::size_t gk = k - static_cast<std::size_t>(a0.num_primary_axes);
    if (gk >= geometry.shape().size() || geometry.shape()[gk] != a0.axes[k].range)
      throw std::invalid_argument("contract: secondary axis mismatch");
  }
  if (geometry.rank() != static_cast<int>(a0.axes.size()) - a0.num_primary_axes)
    throw std::invalid_argument("contract: secondary rank mismatch");

  std::vector<int> out_shape;
  for (int k = 0; k < a0.num_primary_axes; ++k) out_shape.push_back(a0.axes[static_cast<std::size_t>(k)].range);
  NdArray out(out_shape);
  const std::vector<double> flat =
      contract_flattened(a0, std::span<const double>(geometry.data(), geometry.size()));
  std::copy(flat.begin(), flat.end(), out.data());
  return out;
}

namespace {

// Physical-space value table for one factor of one monomial: the factor's
// value for every (summation-letter assignment, dof, point), with
// derivatives pulled back through the Jacobian inverse per point.
struct OracleFactor {
  bool is_coefficient = false;
  int function = 0;
  bool dof_primary = false;
  int dof_pos = 0; // argument ordinal
  std::vector<double> vals; // [letter_assign][dof][point]
  int ndof = 0;
};

} // namespace

NdArray oracle_element_tensor(const Form& form, const AffineMap& map, const CoefficientData& coeffs,
                              int quad_degree) {
  const FiniteElement& e = *form.element;
  const int d = e.dimension();
  const int ndof = e.space_dimension();
  std::vector<int> out_shape(static_cast<std::size_t>(form.arity), ndof);
  NdArray out(out_shape);

  for (const Monomial& mono : form.monomials) {
    const int degree = quad_degree >= 0 ? quad_degree : required_degree(mono, e.degree());
    const QuadratureRule rule = simplex_rule(e.cell(), degree);
    const int npts = rule.num_points();

    // summation letters of this monomial (coefficient dof indices excluded:
    // coefficients are evaluated as functions)
    std::vector<IndexId> letters;
    std::vector<bool> is_coeff_dof(mono.indices.size(), false);
    for (const Factor& f : mono.factors)
      if (f.is_coefficient) is_coeff_dof[static_cast<std::size_t>(f.basis_index)] = true;
    for (const Index& ix : mono.indices)
      if (ix.kind == IndexKind::summation && !is_coeff_dof[static_cast<std::size_t>(ix.id)])
        letters.push_back(ix.id);
    std::vector<int> letter_ranges;
    for (IndexId id : letters) letter_ranges.push_back(mono.index(id).range);
    const std::uint64_t nL = NdArray::entry_count(letter_ranges);

    std::map<IndexId, int> letter_pos;
    for (std::size_t k = 0; k < letters.size(); ++k) letter_pos[letters[k]] = static_cast<int>(k);

    // per-factor tables
    std::vector<OracleFactor> factors;
    std::map<std::vector<int>, TabulatedBasis> tabs;
    auto tabulate_ref = [&](std::vector<int> deriv) -> const TabulatedBasis& {
      std::sort(deriv.begin(), deriv.end());
      auto it = tabs.find(deriv);
      if (it == tabs.end()) it = tabs.emplace(deriv, e.tabulate(rule.points, deriv)).first;
      return it->second;
    };

    std::vector<int> assign(letters.size(), 0);
    for (const Factor& f : mono.factors) {
      OracleFactor of;
      of.is_coefficient = f.is_coefficient;
      of.function = f.function;
      of.dof_primary = !f.is_coefficient;
      of.dof_pos = f.function;
      of.ndof = f.is_coefficient ? 1 : ndof;
      of.vals.assign(nL * of.ndof * static_cast<std::size_t>(npts), 0.0);

      std::fill(assign.begin(), assign.end(), 0);
      for (std::uint64_t L = 0; L < nL; ++L) {
        auto value_of = [&](IndexId id) {
          const Index& ix = mono.index(id);
          if (ix.kind == IndexKind::fixed) return ix.fixed_value;
          return assign[static_cast<std::size_t>(letter_pos.at(id))];
        };
        const int component = f.component ? value_of(*f.component) : -1;
        const int nderiv = static_cast<int>(f.derivatives.size());

        // sum over all reference-direction assignments of the chain rule
        std::vector<int> ref_dirs(static_cast<std::size_t>(nderiv), 0);
        std::vector<int> ref_shape(static_cast<std::size_t>(nderiv), d);
        const std::uint64_t nRef = NdArray::entry_count(ref_shape);
        for (std::uint64_t R = 0; R < nRef; ++R) {
          double jfactor = 1.0;
          for (int t = 0; t < nderiv; ++t)
            jfactor *= map.jinv(ref_dirs[static_cast<std::size_t>(t)],
                                value_of(f.derivatives[static_cast<std::size_t>(t)]));
          const TabulatedBasis& tb = tabulate_ref(ref_dirs);
          for (int pt = 0; pt < npts; ++pt) {
            if (f.is_coefficient) {
              // function value: sum of expansion coefficients times basis
              double v = 0.0;
              for (int dof = 0; dof < ndof; ++dof) {
                const double bv = (e.vector_size() > 1 && e.dof_component(dof) != component)
                                      ? 0.0
                                      : tb.at(pt, dof);
                v += coeffs.at(static_cast<std::size_t>(f.function))[static_cast<std::size_t>(dof)] * bv;
              }
              of.vals[L * static_cast<std::size_t>(npts) + pt] += jfactor * v;
            } else {
              for (int dof = 0; dof < ndof; ++dof) {
                const double bv = (e.vector_size() > 1 && e.dof_component(dof) != component)
                                      ? 0.0
                                      : tb.at(pt, dof);
                of.vals[(L * ndof + dof) * static_cast<std::size_t>(npts) + pt] += jfactor * bv;
              }
            }
          }
          if (nderiv > 0) next_multi_index(ref_dirs, ref_shape);
        }
        if (!letters.empty()) next_multi_index(assign, letter_ranges);
      }
      factors.push_back(std::move(of));
    }

    // accumulate: for each primary multi-index, sum over letter
    // assignments (outer) and points (inner)
    const double cst = mono.constant.to_double();
    std::vector<int> pshape(static_cast<std::size_t>(form.arity), ndof);
    const std::uint64_t nP = NdArray::entry_count(pshape);
    std::vector<int> pmulti(static_cast<std::size_t>(form.arity), 0);
    for (std::uint64_t P = 0; P < nP; ++P) {
      double acc = 0.0;
      for (std::uint64_t L = 0; L < nL; ++L) {
        for (int pt = 0; pt < npts; ++pt) {
          double prod = rule.weights[static_cast<std::size_t>(pt)];
          for (const OracleFactor& of : factors) {
            const std::size_t dof =
                of.dof_primary ? static_cast<std::size_t>(pmulti[static_cast<std::size_t>(of.dof_pos)]) : 0;
            prod *= of.vals[(L * of.ndof + dof) * static_cast<std::size_t>(npts) + pt];
          }
          acc += prod;
        }
      }
      out[P] += cst * map.abs_det * acc;
      if (!pshape.empty()) next_multi_index(pmulti, pshape);
    }
  }
  return out;
}

} // namespace ftc
