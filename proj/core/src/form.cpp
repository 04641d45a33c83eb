#include "ftc/form.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ftc {

namespace {

// Serialize a monomial under a given factor order, renaming summation
// indices by first occurrence. Primary and fixed indices keep stable tags.
std::string serialize_permuted(const Monomial& m, const std::vector<int>& perm) {
  std::map<IndexId, int> rename;
  auto tag = [&](IndexId id) -> std::string {
    const Index& ix = m.index(id);
    if (ix.kind == IndexKind::primary) return "P" + std::to_string(ix.id) + "r" + std::to_string(ix.range);
    if (ix.kind == IndexKind::fixed) return "#" + std::to_string(ix.fixed_value);
    auto [it, inserted] = rename.emplace(id, static_cast<int>(rename.size()));
    return "s" + std::to_string(it->second) + "r" + std::to_string(ix.range);
  };
  std::ostringstream os;
  for (int fi : perm) {
    const Factor& f = m.factors[static_cast<std::size_t>(fi)];
    os << (f.is_coefficient ? "c" : "v") << f.function << "{" << tag(f.basis_index) << ";";
    if (f.component) os << tag(*f.component);
    os << ";";
    for (IndexId d : f.derivatives) os << "(" << tag(d) << ")";
    os << "}";
  }
  return os.str();
}

} // namespace

std::string Monomial::canonical_key() const {
  const int m = static_cast<int>(factors.size());
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best = serialize_permuted(*this, perm);
  if (m <= 6) {
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::string s = serialize_permuted(*this, perm);
      if (s < best) best = std::move(s);
    }
  }
  return best;
}

Form simplify(const Form& form) {
  Form out = form;
  out.monomials.clear();
  std::map<std::string, std::size_t> seen; // key -> position in out.monomials
  for (const Monomial& m : form.monomials) {
    const std::string key = m.canonical_key();
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, out.monomials.size());
      out.monomials.push_back(m);
    } else {
      Monomial& dst = out.monomials[it->second];
      dst.constant = dst.constant + m.constant;
    }
  }
  std::erase_if(out.monomials, [](const Monomial& m) { return m.constant.is_zero(); });
  return out;
}

std::string print_monomial(const Form& form, const Monomial& m) {
  // Letter names for summation indices, in first-occurrence order over
  // component/derivative slots. Coefficient dof indices are implicit.
  static const char* letters[] = {"i", "j", "k", "l", "m", "n", "p", "q", "r", "s"};
  std::map<IndexId, std::string> names;
  auto slot_name = [&](IndexId id) -> std::string {
    const Index& ix = m.index(id);
    if (ix.kind == IndexKind::fixed) return std::to_string(ix.fixed_value);
    auto it = names.find(id);
    if (it != names.end()) return it->second;
    if (names.size() >= std::size(letters)) throw std::logic_error("too many indices to print");
    return names.emplace(id, letters[names.size()]).first->second;
  };
  std::ostringstream os;
  bool first = true;
  auto star = [&] {
    if (!first) os << "*";
    first = false;
  };
  const Rational c = m.constant;
  if (!c.is_one() && c != Rational(-1)) {
    star();
    os << (c.num() < 0 ? Rational(-c.num(), c.den()) : c).str();
  }
  for (const Factor& f : m.factors) {
    star();
    os << (f.is_coefficient ? form.coefficient_names.at(static_cast<std::size_t>(f.function))
                            : form.argument_names.at(static_cast<std::size_t>(f.function)));
    if (f.component) os << "[" << slot_name(*f.component) << "]";
    for (IndexId d : f.derivatives) os << ".dx(" << slot_name(d) << ")";
  }
  star();
  os << "dx";
  return os.str();
}

std::string print_form(const Form& form) {
  std::ostringstream os;
  const FiniteElement& e = *form.element;
  os << "element = Lagrange(" << e.degree() << ", " << cell_name(e.cell()) << ", "
     << e.vector_size() << ")\n";
  os << "arguments =";
  for (std::size_t i = 0; i < form.argument_names.size(); ++i)
    os << (i ? "," : "") << " " << form.argument_names[i];
  os << "\n";
  if (!form.coefficient_names.empty()) {
    os << "coefficients =";
    for (std::size_t i = 0; i < form.coefficient_names.size(); ++i)
      os << (i ? "," : "") << " " << form.coefficient_names[i];
    os << "\n";
  }
  os << form.name << " = ";
  for (std::size_t i = 0; i < form.monomials.size(); ++i) {
    const Monomial& m = form.monomials[i];
    const bool negative = m.constant.num() < 0;
    if (i == 0) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    os << print_monomial(form, m);
  }
  os << "\n";
  return os.str();
}

bool canonically_equal(const Form& a, const Form& b) {
  if (a.arity != b.arity || a.coefficient_names.size() != b.coefficient_names.size()) return false;
  if (!(*a.element == *b.element)) return false;
  auto keyed = [](const Form& f) {
    std::vector<std::pair<std::string, Rational>> v;
    for (const Monomial& m : f.monomials) v.emplace_back(m.canonical_key(), m.constant);
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return v;
  };
  const auto ka = keyed(a), kb = keyed(b);
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (ka[i].first != kb[i].first || ka[i].second != kb[i].second) return false;
  return true;
}

} // namespace ftc
