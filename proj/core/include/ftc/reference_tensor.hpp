#pragma once

#include "ftc/lowering.hpp"
#include "ftc/ndarray.hpp"
#include "ftc/quadrature.hpp"

#include <cstdint>
#include <stdexcept>

namespace ftc {

enum class Algorithm { naive, assembled };

struct AxisInfo {
  IndexKind kind = IndexKind::primary;
  int range = 0;
  IndexId index = -1;
};

/// Cell-independent factor of the element tensor, with axes
/// [primary..., secondary...] in the lowering module's canonical order.
struct ReferenceTensor {
  NdArray values;
  std::vector<AxisInfo> axes;
  Algorithm provenance = Algorithm::naive;

  int num_primary_axes = 0;
  std::uint64_t primary_size() const;
  std::uint64_t secondary_size() const;
};

struct ComputeOptions {
  std::uint64_t max_entries = std::uint64_t(1) << 27; // ~1 GiB of doubles
  int threads = 0;                                    // 0: hardware concurrency
  bool parallel_points = false; // opt-in point-partitioned accumulation (assembled only)
};

struct ComputeResult {
  ReferenceTensor tensor;
  std::uint64_t multiply_count = 0;
};

/// Thrown when a tensor would exceed the configured entry cap or an
/// allocation fails; the message names the required entry count.
class TensorSizeError : public std::runtime_error {
public:
  TensorSizeError(std::uint64_t required, std::uint64_t cap)
      : std::runtime_error("reference tensor needs " + std::to_string(required) +
                           " entries, above the cap of " + std::to_string(cap)),
        required_(required) {}
  std::uint64_t required_entries() const { return required_; }

private:
  std::uint64_t required_;
};

/// Entry-by-entry quadrature: for every (primary, secondary) multi-index,
/// sum over the auxiliary set and the quadrature points of the weighted
/// factor product. Entries are written once; the per-entry accumulation
/// order (auxiliary outer, points inner) is fixed, so results are
/// bit-reproducible also when entries are computed in parallel.
ComputeResult compute_naive(const ReferenceMonomial& monomial, const QuadratureRule& rule,
                            const ComputeOptions& options = {});

/// Basis values pre-tabulated at the quadrature points for one factor.
/// values has shape [auxiliary assignments][points][dof x local secondary
/// axes] with the slice laid out row-major as [dof, secondary slots in
/// slot order]. Identical (element, derivative, component) tabulations are
/// computed once and shared.
struct PsiTable {
  int factor = 0;
  NdArray values;
  std::vector<int> slice_shape;      // [dof, local secondary ranges...]
  std::vector<int> auxiliary_shape;  // ranges of the bound auxiliary slots
  std::vector<int> auxiliary_positions; // positions into the monomial's auxiliary order
};

std::vector<PsiTable> tabulate_psi_tables(const ReferenceMonomial& monomial,
                                          const QuadratureRule& rule);

/// Quadrature-point/auxiliary-driven assembly: for every point and
/// auxiliary assignment the whole tensor is updated with a cumulative
/// outer product of the factor slices (weight first). Zero entries of the
/// running product are not multiplied further, which the multiply counter
/// reflects. The single final permutation moves the factor-order axes
/// into the canonical [primary..., secondary...] order. Serial and
/// deterministic by default; equals compute_naive up to summation-order
/// roundoff.
ComputeResult compute_assembled(const ReferenceMonomial& monomial, const QuadratureRule& rule,
                                const ComputeOptions& options = {});

/// Rule exact for the monomial's reference integrand.
QuadratureRule default_rule(const ReferenceMonomial& monomial);

} // namespace ftc
