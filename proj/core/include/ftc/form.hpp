#pragma once

#include "ftc/cell.hpp"
#include "ftc/element.hpp"
#include "ftc/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ftc {

using IndexId = int;

/// Classification of a monomial index.
///
/// At parse time every non-primary, non-fixed index is a plain summation
/// index; lowering splits them into secondary indices (contracted between
/// the reference and geometry tensors), auxiliary indices summed inside
/// the reference-tensor integral, and auxiliary indices summed inside the
/// geometry tensor.
enum class IndexKind { primary, secondary, auxiliary, auxiliary_geometry, fixed, summation };

struct Index {
  IndexId id = -1;
  IndexKind kind = IndexKind::summation;
  int range = 0;
  int fixed_value = -1;    // only for kind fixed
  std::string name;        // DSL letter where one exists
};

/// One basis-function or coefficient factor of a monomial.
struct Factor {
  int function = 0;          // argument ordinal or coefficient ordinal
  bool is_coefficient = false;
  IndexId basis_index = -1;  // primary index (arguments) or dof summation index (coefficients)
  std::optional<IndexId> component;
  std::vector<IndexId> derivatives; // direction per application, innermost first
};

/// Product of factors under one integral; the index table is scoped to
/// the monomial.
struct Monomial {
  Rational constant{1};
  std::vector<Factor> factors;
  std::vector<Index> indices;

  const Index& index(IndexId id) const { return indices[static_cast<std::size_t>(id)]; }

  /// Structural key invariant under factor permutation and renaming of
  /// summation indices. Two monomials merge in simplify() iff keys match.
  std::string canonical_key() const;
};

struct Form {
  std::string name = "a";
  ElementPtr element; // shared by all arguments and coefficients
  int arity = 0;
  std::vector<std::string> argument_names;
  std::vector<std::string> coefficient_names;
  std::vector<Monomial> monomials;
};

/// Merge monomials equal up to index renaming and factor permutation by
/// summing their (exact rational) constants; drop zero terms. Idempotent.
Form simplify(const Form& form);

/// Re-parsable text form: header lines plus the expression.
std::string print_form(const Form& form);

/// Expression fragment for a single monomial.
std::string print_monomial(const Form& form, const Monomial& m);

/// Structural equality after canonicalization (used by round-trip tests).
bool canonically_equal(const Form& a, const Form& b);

} // namespace ftc
