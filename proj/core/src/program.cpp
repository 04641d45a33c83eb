#include "ftc/program.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ftc {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> decode_multi(std::uint64_t flat, const std::vector<int>& shape) {
  std::vector<int> multi(shape.size(), 0);
  for (std::size_t k = shape.size(); k-- > 0;) {
    multi[k] = static_cast<int>(flat % static_cast<std::uint64_t>(shape[k]));
    flat /= static_cast<std::uint64_t>(shape[k]);
  }
  return multi;
}

} // namespace

std::uint64_t ContractionProgram::scheduled_multiplies() const {
  std::uint64_t n = 0;
  for (const ProgramGroup& g : groups)
    for (const auto& row : g.schedule) n += row.size();
  return n;
}

ContractionProgram generate(const CompiledForm& compiled, double epsilon_zero) {
  const FiniteElement& e = *compiled.form.element;
  ContractionProgram prog;
  prog.form_name = compiled.form.name;
  prog.cell = e.cell();
  prog.dim = e.dimension();
  prog.output_shape.assign(static_cast<std::size_t>(compiled.form.arity), e.space_dimension());
  prog.num_coefficients = static_cast<int>(compiled.form.coefficient_names.size());
  prog.coefficient_dim = e.space_dimension();
  prog.epsilon_zero = epsilon_zero;

  for (std::size_t gi = 0; gi < compiled.groups.size(); ++gi) {
    const FactorGroup& group = compiled.groups[gi];
    const ReferenceTensor& tensor = compiled.group_tensors[gi].tensor;
    const ReferenceMonomial& rep = compiled.lowered[static_cast<std::size_t>(group.representative)].ref;

    ProgramGroup pg;
    pg.primary_shape = rep.primary_shape();
    pg.secondary_shape = rep.secondary_shape();
    const std::uint64_t nI = NdArray::entry_count(pg.primary_shape);
    const std::uint64_t nA = NdArray::entry_count(pg.secondary_shape);
    pg.a0.assign(tensor.values.data(), tensor.values.data() + tensor.values.size());

    // geometry recipe: all members' expansions summed per alpha
    pg.g.resize(nA);
    for (std::uint64_t a = 0; a < nA; ++a) {
      const std::vector<int> alpha = decode_multi(a, pg.secondary_shape);
      for (const FactorGroupMember& member : group.members) {
        const GeometryTensorExpr& gx = member.geometry;
        const std::uint64_t nOuter = NdArray::entry_count(gx.outer_ranges);
        for (std::uint64_t o = 0; o < nOuter; ++o) {
          const std::vector<int> outer = decode_multi(o, gx.outer_ranges);
          auto resolve = [&](const GeoSlot& s) {
            switch (s.cls) {
            case GeoSlot::Cls::secondary: return alpha[static_cast<std::size_t>(s.value)];
            case GeoSlot::Cls::outer: return outer[static_cast<std::size_t>(s.value)];
            default: return s.value;
            }
          };
          ProgramTerm term;
          term.constant = gx.constant.to_double();
          for (const auto& entry : gx.jacobian)
            term.jinv.emplace_back(resolve(entry.ref), resolve(entry.phys));
          for (const auto& [which, pos] : gx.coefficients)
            term.coeff.emplace_back(which, alpha[static_cast<std::size_t>(pos)]);
          pg.g[a].push_back(std::move(term));
        }
      }
    }

    // zero-skipped schedule
    double max_abs = 0.0;
    for (double v : pg.a0) max_abs = std::max(max_abs, std::abs(v));
    const double threshold = epsilon_zero * max_abs;
    pg.schedule.resize(nI);
    for (std::uint64_t i = 0; i < nI; ++i) {
      auto& row = pg.schedule[i];
      for (std::uint64_t a = 0; a < nA; ++a)
        if (std::abs(pg.a0[i * nA + a]) > threshold) row.push_back(static_cast<int>(a));
    }
    prog.groups.push_back(std::move(pg));
  }
  return prog;
}

NdArray interpret(const ContractionProgram& prog, const AffineMap& map, const CoefficientData& coeffs) {
  NdArray out(prog.output_shape);
  for (const ProgramGroup& pg : prog.groups) {
    const std::uint64_t nA = NdArray::entry_count(pg.secondary_shape);
    std::vector<double> g(nA, 0.0);
    for (std::uint64_t a = 0; a < nA; ++a) {
      double acc = 0.0;
      for (const ProgramTerm& term : pg.g[a]) {
        double v = term.constant * map.abs_det;
        for (const auto& [r, c] : term.jinv) v *= map.jinv(r, c);
        for (const auto& [which, dof] : term.coeff) {
          if (which >= static_cast<int>(coeffs.size()))
            throw std::invalid_argument("program references missing coefficient " + std::to_string(which));
          v *= coeffs[static_cast<std::size_t>(which)][static_cast<std::size_t>(dof)];
        }
        acc += v;
      }
      g[a] = acc;
    }
    const std::uint64_t nI = NdArray::entry_count(pg.primary_shape);
    for (std::uint64_t i = 0; i < nI; ++i) {
      double acc = 0.0;
      for (int a : pg.schedule[i]) acc += pg.a0[i * nA + static_cast<std::uint64_t>(a)] * g[static_cast<std::size_t>(a)];
      out[i] += acc;
    }
  }
  return out;
}

std::string render_c_like(const ContractionProgram& prog) {
  std::ostringstream os;
  const std::uint64_t nOut = NdArray::entry_count(prog.output_shape);
  os << "// element tensor kernel for form '" << prog.form_name << "' on a " << cell_name(prog.cell)
     << "\n";
  os << "// A: " << nOut << " entries, row-major over shape (";
  for (std::size_t k = 0; k < prog.output_shape.size(); ++k)
    os << (k ? ", " : "") << prog.output_shape[k];
  os << ")\n";
  os << "// detF: |det F'|; Jinv: " << prog.dim << "x" << prog.dim
     << " reference-from-physical Jacobian, row-major\n";
  if (prog.num_coefficients > 0)
    os << "// w: coefficient dof values, w[k][0.." << prog.coefficient_dim - 1 << "]\n";
  os << "void element_tensor(double* A, double detF, const double* Jinv";
  if (prog.num_coefficients > 0) os << ", const double* const* w";
  os << ")\n{\n";

  for (std::size_t gi = 0; gi < prog.groups.size(); ++gi) {
    const ProgramGroup& pg = prog.groups[gi];
    const std::uint64_t nA = NdArray::entry_count(pg.secondary_shape);
    for (std::uint64_t a = 0; a < nA; ++a) {
      os << "    const double G" << gi << "_" << a << " = ";
      if (pg.g[a].empty()) {
        os << "0.0";
      } else {
        for (std::size_t t = 0; t < pg.g[a].size(); ++t) {
          const ProgramTerm& term = pg.g[a][t];
          if (t) os << " + ";
          os << fmt17(term.constant) << "*detF";
          for (const auto& [r, c] : term.jinv) os << "*Jinv[" << r * prog.dim + c << "]";
          for (const auto& [which, dof] : term.coeff) os << "*w[" << which << "][" << dof << "]";
        }
      }
      os << ";\n";
    }
  }
  const std::uint64_t nI = nOut;
  for (std::uint64_t i = 0; i < nI; ++i) {
    bool first = true;
    for (std::size_t gi = 0; gi < prog.groups.size(); ++gi) {
      const ProgramGroup& pg = prog.groups[gi];
      const std::uint64_t nA = NdArray::entry_count(pg.secondary_shape);
      if (pg.schedule[i].empty()) continue;
      os << "    A[" << i << "] " << (first ? "=" : "+=") << " ";
      for (std::size_t t = 0; t < pg.schedule[i].size(); ++t) {
        const int a = pg.schedule[i][static_cast<std::size_t>(t)];
        if (t) os << " + ";
        os << fmt17(pg.a0[i * nA + static_cast<std::uint64_t>(a)]) << "*G" << gi << "_" << a;
      }
      os << ";\n";
      first = false;
    }
    if (first) os << "    A[" << i << "] = 0.0;\n";
  }
  os << "}\n";
  return os.str();
}

std::string serialize(const ContractionProgram& prog) {
  std::ostringstream os;
  os << "ftc-program 1\n";
  os << "form " << prog.form_name << "\n";
  os << "cell " << cell_name(prog.cell) << "\n";
  os << "output-shape " << prog.output_shape.size();
  for (int s : prog.output_shape) os << " " << s;
  os << "\n";
  os << "coefficients " << prog.num_coefficients << " " << prog.coefficient_dim << "\n";
  os << "epsilon " << fmt17(prog.epsilon_zero) << "\n";
  os << "groups " << prog.groups.size() << "\n";
  for (std::size_t gi = 0; gi < prog.groups.size(); ++gi) {
    const ProgramGroup& pg = prog.groups[gi];
    os << "group " << gi << "\n";
    os << "primary-shape " << pg.primary_shape.size();
    for (int s : pg.primary_shape) os << " " << s;
    os << "\n";
    os << "secondary-shape " << pg.secondary_shape.size();
    for (int s : pg.secondary_shape) os << " " << s;
    os << "\n";
    os << "a0 " << pg.a0.size() << "\n";
    for (double v : pg.a0) os << fmt17(v) << "\n";
    os << "g " << pg.g.size() << "\n";
    for (std::size_t a = 0; a < pg.g.size(); ++a) {
      os << "alpha " << a << " " << pg.g[a].size() << "\n";
      for (const ProgramTerm& term : pg.g[a]) {
        os << "term const " << fmt17(term.constant) << " detf";
        for (const auto& [r, c] : term.jinv) os << " jinv " << r << " " << c;
        for (const auto& [w, dof] : term.coeff) os << " coeff " << w << " " << dof;
        os << "\n";
      }
    }
    os << "schedule " << pg.schedule.size() << "\n";
    for (std::size_t i = 0; i < pg.schedule.size(); ++i) {
      os << "row " << i << " " << pg.schedule[i].size();
      for (int a : pg.schedule[i]) os << " " << a;
      os << "\n";
    }
    os << "end group\n";
  }
  os << "end\n";
  return os.str();
}

namespace {

class LineReader {
public:
  explicit LineReader(const std::string& text) : is_(text) {}

  std::istringstream expect(const std::string& keyword) {
    std::string line;
    while (std::getline(is_, line)) {
      ++lineno_;
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string kw;
      ls >> kw;
      if (kw != keyword)
        throw std::runtime_error("program line " + std::to_string(lineno_) + ": expected '" + keyword +
                                 "', found '" + kw + "'");
      return ls;
    }
    throw std::runtime_error("program: unexpected end of file, expected '" + keyword + "'");
  }

  std::string value_line() {
    std::string line;
    while (std::getline(is_, line)) {
      ++lineno_;
      if (!line.empty()) return line;
    }
    throw std::runtime_error("program: unexpected end of file");
  }

  int lineno() const { return lineno_; }

private:
  std::istringstream is_;
  int lineno_ = 0;
};

std::vector<int> read_shape(std::istringstream& ls, int lineno) {
  std::size_t n = 0;
  if (!(ls >> n)) throw std::runtime_error("program line " + std::to_string(lineno) + ": bad shape");
  std::vector<int> shape(n);
  for (std::size_t k = 0; k < n; ++k)
    if (!(ls >> shape[k])) throw std::runtime_error("program line " + std::to_string(lineno) + ": bad shape");
  return shape;
}

} // namespace

ContractionProgram parse_program(const std::string& text) {
  LineReader r(text);
  ContractionProgram prog;
  {
    auto ls = r.expect("ftc-program");
    int version = 0;
    if (!(ls >> version) || version != 1) throw std::runtime_error("program: unsupported version");
  }
  {
    auto ls = r.expect("form");
    ls >> prog.form_name;
  }
  {
    auto ls = r.expect("cell");
    std::string cn;
    ls >> cn;
    prog.cell = cell_type_from_name(cn);
    prog.dim = cell_dimension(prog.cell);
  }
  {
    auto ls = r.expect("output-shape");
    prog.output_shape = read_shape(ls, r.lineno());
  }
  {
    auto ls = r.expect("coefficients");
    if (!(ls >> prog.num_coefficients >> prog.coefficient_dim))
      throw std::runtime_error("program: bad coefficients line");
  }
  {
    auto ls = r.expect("epsilon");
    if (!(ls >> prog.epsilon_zero)) throw std::runtime_error("program: bad epsilon line");
  }
  std::size_t ngroups = 0;
  {
    auto ls = r.expect("groups");
    if (!(ls >> ngroups)) throw std::runtime_error("program: bad groups line");
  }
  for (std::size_t gi = 0; gi < ngroups; ++gi) {
    r.expect("group");
    ProgramGroup pg;
    {
      auto ls = r.expect("primary-shape");
      pg.primary_shape = read_shape(ls, r.lineno());
    }
    {
      auto ls = r.expect("secondary-shape");
      pg.secondary_shape = read_shape(ls, r.lineno());
    }
    std::size_t na0 = 0;
    {
      auto ls = r.expect("a0");
      if (!(ls >> na0)) throw std::runtime_error("program: bad a0 line");
    }
    pg.a0.resize(na0);
    for (std::size_t k = 0; k < na0; ++k) {
      const std::string line = r.value_line();
      try {
        pg.a0[k] = std::stod(line);
      } catch (const std::exception&) {
        throw std::runtime_error("program line " + std::to_string(r.lineno()) + ": bad value");
      }
    }
    std::size_t ng = 0;
    {
      auto ls = r.expect("g");
      if (!(ls >> ng)) throw std::runtime_error("program: bad g line");
    }
    pg.g.resize(ng);
    for (std::size_t a = 0; a < ng; ++a) {
      std::size_t idx = 0, nterms = 0;
      {
        auto ls = r.expect("alpha");
        if (!(ls >> idx >> nterms) || idx != a) throw std::runtime_error("program: bad alpha line");
      }
      for (std::size_t t = 0; t < nterms; ++t) {
        auto ls = r.expect("term");
        std::string kw;
        ProgramTerm term;
        bool have_const = false;
        while (ls >> kw) {
          if (kw == "const") {
            if (!(ls >> term.constant)) throw std::runtime_error("program: bad const token");
            have_const = true;
          } else if (kw == "detf") {
            // always present; no payload
          } else if (kw == "jinv") {
            int rr = 0, cc = 0;
            if (!(ls >> rr >> cc)) throw std::runtime_error("program: bad jinv token");
            term.jinv.emplace_back(rr, cc);
          } else if (kw == "coeff") {
            int w = 0, dof = 0;
            if (!(ls >> w >> dof)) throw std::runtime_error("program: bad coeff token");
            term.coeff.emplace_back(w, dof);
          } else {
            throw std::runtime_error("program line " + std::to_string(r.lineno()) + ": unknown token '" +
                                     kw + "'");
          }
        }
        if (!have_const) throw std::runtime_error("program: term missing const token");
        pg.g[a].push_back(std::move(term));
      }
    }
    std::size_t nrows = 0;
    {
      auto ls = r.expect("schedule");
      if (!(ls >> nrows)) throw std::runtime_error("program: bad schedule line");
    }
    pg.schedule.resize(nrows);
    for (std::size_t i = 0; i < nrows; ++i) {
      auto ls = r.expect("row");
      std::size_t idx = 0, count = 0;
      if (!(ls >> idx >> count) || idx != i) throw std::runtime_error("program: bad row line");
      pg.schedule[i].resize(count);
      for (std::size_t k = 0; k < count; ++k)
        if (!(ls >> pg.schedule[i][k])) throw std::runtime_error("program: bad row line");
    }
    r.expect("end");
    prog.groups.push_back(std::move(pg));
  }
  r.expect("end");

  // structural sanity: schedule/a0 sizes must be consistent
  for (const ProgramGroup& pg : prog.groups) {
    const std::uint64_t nI = NdArray::entry_count(pg.primary_shape);
    const std::uint64_t nA = NdArray::entry_count(pg.secondary_shape);
    if (pg.a0.size() != nI * nA || pg.g.size() != nA || pg.schedule.size() != nI)
      throw std::runtime_error("program: inconsistent group sizes");
    for (const auto& row : pg.schedule)
      for (int a : row)
        if (a < 0 || static_cast<std::uint64_t>(a) >= nA)
          throw std::runtime_error("program: schedule entry out of range");
  }
  return prog;
}

} // namespace ftc
