#include "ftc/signature.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace ftc {

namespace {

std::vector<std::string> signature_fragments(const ReferenceMonomial& rm, bool soft) {
  auto tag = [&](IndexId id) -> std::string {
    const Index& ix = rm.indices[static_cast<std::size_t>(id)];
    switch (ix.kind) {
    case IndexKind::primary: return "i" + std::to_string(ix.id);
    case IndexKind::fixed: return std::to_string(ix.fixed_value);
    case IndexKind::secondary: {
      if (soft) return "a";
      const auto it = std::find(rm.secondary.begin(), rm.secondary.end(), id);
      return "a" + std::to_string(it - rm.secondary.begin());
    }
    case IndexKind::auxiliary: {
      if (soft) return "b";
      const auto it = std::find(rm.auxiliary.begin(), rm.auxiliary.end(), id);
      return "b" + std::to_string(it - rm.auxiliary.begin());
    }
    default: throw std::logic_error("unclassified index in signature");
    }
  };
  std::vector<std::string> fragments;
  for (const Factor& f : rm.factors) {
    std::ostringstream os;
    os << "{" << rm.element->description() << ";" << tag(f.basis_index) << ";[";
    if (f.component) os << tag(*f.component);
    os << "];[";
    for (IndexId d : f.derivatives) os << "(d/dX" << tag(d) << ")";
    os << "]}";
    fragments.push_back(os.str());
  }
  return fragments;
}

std::string signature_impl(const ReferenceMonomial& rm, bool soft) {
  std::ostringstream os;
  for (const std::string& frag : signature_fragments(rm, soft)) os << frag << "*";
  os << "dX";
  return os.str();
}

// Soft-match trigger: soft fragments, insensitive to factor order.
std::string sorted_soft_key(const ReferenceMonomial& rm) {
  std::vector<std::string> fragments = signature_fragments(rm, true);
  std::sort(fragments.begin(), fragments.end());
  std::string key;
  for (const std::string& f : fragments) key += f + "*";
  return key;
}

// Translate ids of a permuted re-lowering back to the natural lowering:
// parse-time ids are shared, fresh reference ids correspond through their
// (original factor, derivative slot) provenance.
class IdTranslator {
public:
  IdTranslator(const Monomial& parse_monomial, const ChainRuledMonomial& natural,
               const ChainRuledMonomial& permuted, const std::vector<int>& perm) {
    n_parse_ = static_cast<IndexId>(parse_monomial.indices.size());
    std::map<std::pair<int, int>, IndexId> natural_fresh;
    for (std::size_t k = 0; k < natural.fresh_origin.size(); ++k)
      natural_fresh[natural.fresh_origin[k]] = n_parse_ + static_cast<IndexId>(k);
    for (std::size_t k = 0; k < permuted.fresh_origin.size(); ++k) {
      const auto [pfac, slot] = permuted.fresh_origin[k];
      const int natural_factor = perm[static_cast<std::size_t>(pfac)];
      permuted_to_natural_[n_parse_ + static_cast<IndexId>(k)] = natural_fresh.at({natural_factor, slot});
    }
  }

  IndexId operator()(IndexId permuted_id) const {
    if (permuted_id < n_parse_) return permuted_id;
    return permuted_to_natural_.at(permuted_id);
  }

private:
  IndexId n_parse_ = 0;
  std::map<IndexId, IndexId> permuted_to_natural_;
};

Monomial permute_factors(const Monomial& m, const std::vector<int>& perm) {
  Monomial out = m;
  out.factors.clear();
  for (int p : perm) out.factors.push_back(m.factors[static_cast<std::size_t>(p)]);
  return out;
}

GeometryTensorExpr remap_geometry(const GeometryTensorExpr& g, const std::vector<int>& sec_map) {
  GeometryTensorExpr out = g;
  auto remap_slot = [&](GeoSlot& s) {
    if (s.cls == GeoSlot::Cls::secondary) s.value = sec_map[static_cast<std::size_t>(s.value)];
  };
  for (auto& [which, pos] : out.coefficients) pos = sec_map[static_cast<std::size_t>(pos)];
  for (auto& entry : out.jacobian) {
    remap_slot(entry.ref);
    remap_slot(entry.phys);
  }
  return out;
}

} // namespace

std::string hard_signature(const ReferenceMonomial& rm) { return signature_impl(rm, false); }
std::string soft_signature(const ReferenceMonomial& rm) { return signature_impl(rm, true); }

std::vector<FactorGroup> factorize(const Form& form, const std::vector<LoweredMonomial>& lowered) {
  std::vector<FactorGroup> groups;
  std::vector<std::string> group_hard, group_soft;

  for (std::size_t mi = 0; mi < lowered.size(); ++mi) {
    const LoweredMonomial& lm = lowered[mi];
    const std::string hard = hard_signature(lm.ref);
    const std::string soft_key = sorted_soft_key(lm.ref);
    const int rank = lm.ref.rank();
    std::vector<int> identity(static_cast<std::size_t>(rank));
    std::iota(identity.begin(), identity.end(), 0);

    bool placed = false;
    for (std::size_t gi = 0; gi < groups.size() && !placed; ++gi) {
      if (group_hard[gi] == hard) {
        groups[gi].members.push_back({static_cast<int>(mi), identity, lm.geometry});
        placed = true;
      }
    }
    if (!placed) {
      for (std::size_t gi = 0; gi < groups.size() && !placed; ++gi) {
        if (group_soft[gi] != soft_key) continue;
        const LoweredMonomial& rep = lowered[static_cast<std::size_t>(groups[gi].representative)];
        if (rep.ref.rank() != rank) continue;
        const Monomial& parse_mono = form.monomials[mi];
        const ChainRuledMonomial natural = apply_chain_rule(parse_mono, form.element);
        const int m = static_cast<int>(parse_mono.factors.size());
        if (m > 6) continue; // permutation search is factorial; forms here are small
        std::vector<int> perm(static_cast<std::size_t>(m));
        std::iota(perm.begin(), perm.end(), 0);
        do {
          const Monomial permuted_mono = permute_factors(parse_mono, perm);
          const ChainRuledMonomial chain = apply_chain_rule(permuted_mono, form.element);
          const LoweredMonomial cand = classify_indices(chain);
          if (hard_signature(cand.ref) != hard_signature(rep.ref)) continue;

          // Positional match found: representative secondary s corresponds
          // to cand.secondary[s]; translate to the member's natural axes.
          const IdTranslator translate(parse_mono, natural, chain, perm);
          const LoweredMonomial natural_lowered = classify_indices(natural);
          const std::vector<IndexId>& nat_sec = natural_lowered.ref.secondary;
          const int r = static_cast<int>(rep.ref.primary.size());
          const int ns = static_cast<int>(rep.ref.secondary.size());
          std::vector<int> axis_map(static_cast<std::size_t>(rank), -1);
          for (int p = 0; p < r; ++p) axis_map[static_cast<std::size_t>(p)] = p;
          std::vector<int> sec_map(static_cast<std::size_t>(ns), -1); // member pos -> rep pos
          bool ok = true;
          for (int s = 0; s < ns && ok; ++s) {
            const IndexId nat_id = translate(cand.ref.secondary[static_cast<std::size_t>(s)]);
            const auto it = std::find(nat_sec.begin(), nat_sec.end(), nat_id);
            if (it == nat_sec.end()) { ok = false; break; }
            const int member_pos = static_cast<int>(it - nat_sec.begin());
            axis_map[static_cast<std::size_t>(r + member_pos)] = r + s;
            sec_map[static_cast<std::size_t>(member_pos)] = s;
          }
          if (!ok) continue;
          for (int v : axis_map)
            if (v < 0) { ok = false; break; }
          if (!ok) continue;

          groups[gi].members.push_back(
              {static_cast<int>(mi), axis_map, remap_geometry(lm.geometry, sec_map)});
          placed = true;
          break;
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
    if (!placed) {
      FactorGroup g;
      g.representative = static_cast<int>(mi);
      g.members.push_back({static_cast<int>(mi), identity, lm.geometry});
      groups.push_back(std::move(g));
      group_hard.push_back(hard);
      group_soft.push_back(sorted_soft_key(lm.ref));
    }
  }
  return groups;
}

} // namespace ftc
