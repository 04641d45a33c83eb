#pragma once

#include "ftc/form.hpp"

#include <span>

namespace ftc {

/// Reference to one position of a lowered monomial's index data, resolved
/// positionally so geometry expressions are self-contained.
struct GeoSlot {
  enum class Cls { secondary, outer, fixed };
  Cls cls = Cls::fixed;
  int value = 0; // secondary position, outer position, or fixed 0-based value

  static GeoSlot sec(int pos) { return {Cls::secondary, pos}; }
  static GeoSlot outer(int pos) { return {Cls::outer, pos}; }
  static GeoSlot fix(int v) { return {Cls::fixed, v}; }
  bool operator==(const GeoSlot&) const = default;
};

/// Symbolic per-cell geometry tensor: constant x product of coefficient
/// values x |det F'| x a sum over local assignments of products of
/// Jacobian-inverse entries.
struct GeometryTensorExpr {
  Rational constant{1};
  std::vector<std::pair<int, int>> coefficients; // (coefficient ordinal, secondary position of dof)
  struct JacobianEntry {
    GeoSlot ref;  // reference direction: always a secondary position
    GeoSlot phys; // physical direction: secondary, outer or fixed
  };
  std::vector<JacobianEntry> jacobian;
  std::vector<int> outer_ranges; // ranges of the geometry-local sum
};

/// Monomial pulled back to the reference cell: derivative slots carry
/// reference directions and every index is classified. Secondary order is
/// canonical and defines the reference tensor's trailing axes: coefficient
/// dof indices in factor order, then component-paired indices, then
/// reference derivative directions, each by first occurrence.
struct ReferenceMonomial {
  std::vector<Factor> factors;
  std::vector<Index> indices;
  std::vector<IndexId> primary;   // one per argument, in argument order
  std::vector<IndexId> secondary; // canonical order
  std::vector<IndexId> auxiliary; // summed inside the reference integral
  ElementPtr element;
  int max_derivative_order = 0; // largest |derivatives| over factors

  std::vector<int> primary_shape() const;
  std::vector<int> secondary_shape() const;
  std::vector<int> auxiliary_shape() const;
  int rank() const { return static_cast<int>(primary.size() + secondary.size()); }
};

struct LoweredMonomial {
  ReferenceMonomial ref;
  GeometryTensorExpr geometry;
};

/// Chain-rule intermediate: derivative slots hold fresh reference
/// directions, each paired with a Jacobian entry binding it to the
/// original physical direction.
struct ChainRuledMonomial {
  Rational constant{1};
  std::vector<Factor> factors;
  std::vector<Index> indices;
  std::vector<std::pair<IndexId, IndexId>> jacobian; // (reference, physical)
  // provenance of each fresh reference index: (factor, derivative slot)
  std::vector<std::pair<int, int>> fresh_origin;
  ElementPtr element;
};

ChainRuledMonomial apply_chain_rule(const Monomial& monomial, ElementPtr element);
LoweredMonomial classify_indices(const ChainRuledMonomial& intermediate);

inline LoweredMonomial lower(const Monomial& monomial, ElementPtr element) {
  return classify_indices(apply_chain_rule(monomial, element));
}

std::vector<LoweredMonomial> lower_form(const Form& form);

/// Debug pretty-printer for a lowered pair.
std::string describe(const LoweredMonomial& lowered);

} // namespace ftc
