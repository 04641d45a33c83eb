#pragma once

#include "ftc/form.hpp"
#include "ftc/lowering.hpp"
#include "ftc/reference_tensor.hpp"
#include "ftc/signature.hpp"

namespace ftc {

struct CompileOptions {
  Algorithm algorithm = Algorithm::assembled;
  int quad_degree = -1; // < 0: exact per-monomial degree
  ComputeOptions compute;
  bool run_simplify = true;
};

/// Fully lowered, factorized form with one reference tensor per group.
struct CompiledForm {
  Form form; // after simplification
  std::vector<LoweredMonomial> lowered;
  std::vector<FactorGroup> groups;
  std::vector<ComputeResult> group_tensors; // indexed like groups
};

CompiledForm compile_form(const Form& form, const CompileOptions& options = {});

} // namespace ftc
