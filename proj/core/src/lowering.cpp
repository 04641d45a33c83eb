#include "ftc/lowering.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ftc {

namespace {

std::vector<int> ranges_of(const std::vector<Index>& table, std::span<const IndexId> ids) {
  std::vector<int> r;
  r.reserve(ids.size());
  for (IndexId id : ids) r.push_back(table[static_cast<std::size_t>(id)].range);
  return r;
}

} // namespace

std::vector<int> ReferenceMonomial::primary_shape() const { return ranges_of(indices, primary); }
std::vector<int> ReferenceMonomial::secondary_shape() const { return ranges_of(indices, secondary); }
std::vector<int> ReferenceMonomial::auxiliary_shape() const { return ranges_of(indices, auxiliary); }

ChainRuledMonomial apply_chain_rule(const Monomial& monomial, ElementPtr element) {
  ChainRuledMonomial out;
  out.constant = monomial.constant;
  out.factors = monomial.factors;
  out.indices = monomial.indices;
  out.element = std::move(element);
  const int dim = out.element->dimension();

  // Replace every physical derivative direction with a fresh reference
  // direction and record the Jacobian entry pairing them. Products and the
  // direction sums commute, so the fresh index simply joins the monomial's
  // summation set.
  for (std::size_t fi = 0; fi < out.factors.size(); ++fi) {
    Factor& f = out.factors[fi];
    for (std::size_t slot = 0; slot < f.derivatives.size(); ++slot) {
      const IndexId phys = f.derivatives[slot];
      Index ref;
      ref.id = static_cast<IndexId>(out.indices.size());
      ref.kind = IndexKind::summation;
      ref.range = dim;
      out.indices.push_back(ref);
      out.fresh_origin.emplace_back(static_cast<int>(fi), static_cast<int>(slot));
      f.derivatives[slot] = ref.id;
      out.jacobian.emplace_back(ref.id, phys);
    }
  }
  return out;
}

LoweredMonomial classify_indices(const ChainRuledMonomial& in) {
  LoweredMonomial out;
  ReferenceMonomial& rm = out.ref;
  rm.factors = in.factors;
  rm.indices = in.indices;
  rm.element = in.element;
  for (const Factor& f : rm.factors)
    rm.max_derivative_order = std::max(rm.max_derivative_order, static_cast<int>(f.derivatives.size()));

  const std::size_t n = rm.indices.size();
  std::vector<bool> in_integrand(n, false), in_geometry(n, false), seen(n, false);

  for (const Factor& f : rm.factors) {
    if (f.is_coefficient) {
      in_integrand[static_cast<std::size_t>(f.basis_index)] = true;
      // the dof is always paired with the coefficient value in the geometry tensor
      in_geometry[static_cast<std::size_t>(f.basis_index)] = true;
    }
    if (f.component) in_integrand[static_cast<std::size_t>(*f.component)] = true;
    for (IndexId d : f.derivatives) in_integrand[static_cast<std::size_t>(d)] = true;
  }
  for (const auto& [ref, phys] : in.jacobian) {
    in_geometry[static_cast<std::size_t>(ref)] = true;
    in_geometry[static_cast<std::size_t>(phys)] = true;
  }

  for (Index& ix : rm.indices) {
    if (ix.kind == IndexKind::primary || ix.kind == IndexKind::fixed) continue;
    const auto i = static_cast<std::size_t>(ix.id);
    if (!in_integrand[i] && !in_geometry[i])
      throw std::logic_error("index occurs nowhere; corrupt monomial");
    if (in_integrand[i] && in_geometry[i]) ix.kind = IndexKind::secondary;
    else if (in_integrand[i]) ix.kind = IndexKind::auxiliary;
    else ix.kind = IndexKind::auxiliary_geometry;
  }

  for (const Factor& f : rm.factors)
    if (!f.is_coefficient) rm.primary.push_back(f.basis_index);
  std::sort(rm.primary.begin(), rm.primary.end()); // primary ids are the argument ordinals

  // canonical secondary order
  auto push_unique = [&](std::vector<IndexId>& v, IndexId id, IndexKind want) {
    if (rm.indices[static_cast<std::size_t>(id)].kind != want) return;
    if (seen[static_cast<std::size_t>(id)]) return;
    seen[static_cast<std::size_t>(id)] = true;
    v.push_back(id);
  };
  for (const Factor& f : rm.factors)
    if (f.is_coefficient) push_unique(rm.secondary, f.basis_index, IndexKind::secondary);
  for (const Factor& f : rm.factors)
    if (f.component) push_unique(rm.secondary, *f.component, IndexKind::secondary);
  for (const Factor& f : rm.factors)
    for (IndexId d : f.derivatives) push_unique(rm.secondary, d, IndexKind::secondary);

  for (const Factor& f : rm.factors) {
    if (f.component) push_unique(rm.auxiliary, *f.component, IndexKind::auxiliary);
    for (IndexId d : f.derivatives) push_unique(rm.auxiliary, d, IndexKind::auxiliary);
  }

  std::vector<IndexId> outer;
  for (const auto& [ref, phys] : in.jacobian)
    push_unique(outer, phys, IndexKind::auxiliary_geometry);

  // positional lookup tables
  std::map<IndexId, int> sec_pos, outer_pos;
  for (std::size_t k = 0; k < rm.secondary.size(); ++k) sec_pos[rm.secondary[k]] = static_cast<int>(k);
  for (std::size_t k = 0; k < outer.size(); ++k) outer_pos[outer[k]] = static_cast<int>(k);

  GeometryTensorExpr& g = out.geometry;
  g.constant = in.constant;
  for (const Factor& f : rm.factors)
    if (f.is_coefficient) {
      const auto it = sec_pos.find(f.basis_index);
      if (it == sec_pos.end()) throw std::logic_error("coefficient dof index is not secondary");
      g.coefficients.emplace_back(f.function, it->second);
    }
  auto to_slot = [&](IndexId id) -> GeoSlot {
    const Index& ix = rm.indices[static_cast<std::size_t>(id)];
    switch (ix.kind) {
    case IndexKind::fixed: return GeoSlot::fix(ix.fixed_value);
    case IndexKind::secondary: return GeoSlot::sec(sec_pos.at(id));
    case IndexKind::auxiliary_geometry: return GeoSlot::outer(outer_pos.at(id));
    default: throw std::logic_error("invalid index kind in geometry expression");
    }
  };
  for (const auto& [ref, phys] : in.jacobian)
    g.jacobian.push_back({to_slot(ref), to_slot(phys)});
  g.outer_ranges = ranges_of(rm.indices, outer);
  return out;
}

std::vector<LoweredMonomial> lower_form(const Form& form) {
  std::vector<LoweredMonomial> out;
  out.reserve(form.monomials.size());
  for (const Monomial& m : form.monomials) out.push_back(lower(m, form.element));
  return out;
}

std::string describe(const LoweredMonomial& lowered) {
  const ReferenceMonomial& rm = lowered.ref;
  std::ostringstream os;
  auto tag = [&](IndexId id) -> std::string {
    const Index& ix = rm.indices[static_cast<std::size_t>(id)];
    switch (ix.kind) {
    case IndexKind::primary: return "i" + std::to_string(ix.id);
    case IndexKind::secondary: {
      const auto it = std::find(rm.secondary.begin(), rm.secondary.end(), id);
      return "a" + std::to_string(it - rm.secondary.begin());
    }
    case IndexKind::auxiliary: {
      const auto it = std::find(rm.auxiliary.begin(), rm.auxiliary.end(), id);
      return "b" + std::to_string(it - rm.auxiliary.begin());
    }
    case IndexKind::fixed: return std::to_string(ix.fixed_value);
    default: return "?";
    }
  };
  os << "reference integrand:";
  for (const Factor& f : rm.factors) {
    os << " " << (f.is_coefficient ? "coeff" : "arg") << f.function << "[basis " << tag(f.basis_index);
    if (f.component) os << ", comp " << tag(*f.component);
    if (!f.derivatives.empty()) {
      os << ", d/dX(";
      for (std::size_t k = 0; k < f.derivatives.size(); ++k)
        os << (k ? "," : "") << tag(f.derivatives[k]);
      os << ")";
    }
    os << "]";
  }
  os << "\nsecondary ranges:";
  for (int r : rm.secondary_shape()) os << " " << r;
  os << "\nauxiliary ranges:";
  for (int r : rm.auxiliary_shape()) os << " " << r;
  const GeometryTensorExpr& g = lowered.geometry;
  os << "\ngeometry: " << g.constant.str() << " * |detF'|";
  for (const auto& [c, pos] : g.coefficients) os << " * w" << c << "[a" << pos << "]";
  auto slot = [](const GeoSlot& s) -> std::string {
    switch (s.cls) {
    case GeoSlot::Cls::secondary: return "a" + std::to_string(s.value);
    case GeoSlot::Cls::outer: return "b'" + std::to_string(s.value);
    default: return std::to_string(s.value);
    }
  };
  if (!g.jacobian.empty()) {
    os << " * sum_{b'}";
    for (const auto& j : g.jacobian) os << " dX" << slot(j.ref) << "/dx" << slot(j.phys);
  }
  os << "\n";
  return os.str();
}

} // namespace ftc
