#include "ftc/compile.hpp"

namespace ftc {

CompiledForm compile_form(const Form& form, const CompileOptions& options) {
  CompiledForm out;
  out.form = options.run_simplify ? simplify(form) : form;
  out.lowered = lower_form(out.form);
  out.groups = factorize(out.form, out.lowered);
  for (const FactorGroup& g : out.groups) {
    const ReferenceMonomial& rep = out.lowered[static_cast<std::size_t>(g.representative)].ref;
    const QuadratureRule rule = options.quad_degree >= 0
                                    ? simplex_rule(rep.element->cell(), options.quad_degree)
                                    : default_rule(rep);
    out.group_tensors.push_back(options.algorithm == Algorithm::naive
                                    ? compute_naive(rep, rule, options.compute)
                                    : compute_assembled(rep, rule, options.compute));
  }
  return out;
}

} // namespace ftc
