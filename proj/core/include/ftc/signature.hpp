#pragma once

#include "ftc/form.hpp"
#include "ftc/lowering.hpp"

#include <string>
#include <vector>

namespace ftc {

/// Exact identification string of a lowered monomial's reference tensor:
/// per factor, the element description, the basis index tag (i0/i1/...
/// primary, a0/a1/... secondary, b0/... auxiliary), the component tag in
/// brackets and a "(d/dXa0)" tag per derivative, joined with '*' and
/// terminated "*dX". Constants and coefficient data are excluded; they
/// live in the geometry tensor.
std::string hard_signature(const ReferenceMonomial& monomial);

/// As hard_signature but with secondary/auxiliary index numbers erased
/// (a0 -> a, b1 -> b), identifying reference tensors up to axis order.
std::string soft_signature(const ReferenceMonomial& monomial);

struct FactorGroupMember {
  int monomial = 0; // index into the lowered list
  /// permute_axes(representative tensor, axis_map) equals this member's
  /// own reference tensor; identity for hard-signature matches.
  std::vector<int> axis_map;
  /// member geometry expression with secondary positions rewritten into
  /// the representative's axis order
  GeometryTensorExpr geometry;
};

struct FactorGroup {
  int representative = 0;
  std::vector<FactorGroupMember> members;
};

/// Group the form's monomials by common reference tensor: equal hard
/// signatures share a group directly; a soft-signature match triggers a
/// search over factor permutations (and the secondary relabeling induced
/// by recanonicalization) for an ordering with an equal hard signature.
/// Monomials that match nothing form singleton groups. The reference
/// tensor is computed once per group, for the representative.
std::vector<FactorGroup> factorize(const Form& form, const std::vector<LoweredMonomial>& lowered);

} // namespace ftc
