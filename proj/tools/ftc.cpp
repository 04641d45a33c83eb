// Command-line driver: compile .form files to contraction programs,
// verify generated programs against direct quadrature on a mesh, and
// benchmark the two reference-tensor algorithms.

#include "ftc/compile.hpp"
#include "ftc/geometry.hpp"
#include "ftc/mesh.hpp"
#include "ftc/parser.hpp"
#include "ftc/program.hpp"
#include "ftc/signature.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace ftc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitVerification = 3;
constexpr int kExitMemoryGuard = 4;

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file: " + path.string());
  f << content;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string a0_dump(const CompiledForm& compiled) {
  std::ostringstream os;
  os << "ftc-a0-dump 1\n";
  os << "form " << compiled.form.name << "\n";
  os << "groups " << compiled.groups.size() << "\n";
  for (std::size_t gi = 0; gi < compiled.groups.size(); ++gi) {
    const ReferenceTensor& t = compiled.group_tensors[gi].tensor;
    os << "group " << gi << "\n";
    os << "axes " << t.axes.size() << "\n";
    for (const AxisInfo& ax : t.axes)
      os << "axis " << (ax.kind == IndexKind::primary ? "primary" : "secondary") << " " << ax.range
         << "\n";
    os << "a0 " << t.values.size() << "\n";
    for (std::size_t k = 0; k < t.values.size(); ++k) os << fmt17(t.values[k]) << "\n";
    os << "end group\n";
  }
  os << "end\n";
  return os.str();
}

struct CommonFlags {
  std::string algorithm = "assembled";
  int quad_degree = -1;
  std::uint64_t max_entries = std::uint64_t(1) << 27;
};

CompileOptions to_options(const CommonFlags& flags) {
  CompileOptions opts;
  opts.algorithm = flags.algorithm == "naive" ? Algorithm::naive : Algorithm::assembled;
  opts.quad_degree = flags.quad_degree;
  opts.compute.max_entries = flags.max_entries;
  return opts;
}

int cmd_compile(const std::string& form_file, const std::string& out_dir, const CommonFlags& flags,
                bool dump_signatures, bool dump_a0) {
  Form form = parse_form(read_file(form_file));
  form.name = fs::path(form_file).stem().string();
  const CompiledForm compiled = compile_form(form, to_options(flags));

  if (dump_signatures) {
    for (std::size_t k = 0; k < compiled.lowered.size(); ++k) {
      std::cout << "monomial " << k << " hard " << hard_signature(compiled.lowered[k].ref) << "\n";
      std::cout << "monomial " << k << " soft " << soft_signature(compiled.lowered[k].ref) << "\n";
    }
    std::cout << "groups " << compiled.groups.size() << "\n";
  }

  const ContractionProgram program = generate(compiled);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_file(dir / (form.name + ".prog"), serialize(program));
  write_file(dir / (form.name + ".c.txt"), render_c_like(program));
  if (dump_a0) write_file(dir / (form.name + ".a0.txt"), a0_dump(compiled));
  return kExitOk;
}

int cmd_verify(const std::string& form_file, const std::string& mesh_file,
               const std::string& program_file, std::uint64_t seed, const CommonFlags& flags) {
  Form form = parse_form(read_file(form_file));
  form.name = fs::path(form_file).stem().string();
  const Mesh mesh = load_mesh(mesh_file);
  if (cell_dimension(form.element->cell()) != mesh.dim)
    throw std::runtime_error("form and mesh dimensions differ");

  ContractionProgram program;
  if (!program_file.empty()) {
    program = parse_program(read_file(program_file));
  } else {
    program = generate(compile_form(form, to_options(flags)));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n_coeff = static_cast<int>(form.coefficient_names.size());
  const int ndof = form.element->space_dimension();
  const std::vector<int> expected_shape(static_cast<std::size_t>(form.arity), ndof);
  if (program.output_shape != expected_shape || program.cell != form.element->cell())
    throw std::runtime_error("program output shape or cell does not match the form");

  double max_rel = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = affine_map(mesh.cell_type, mesh.cell_vertices(c));
    CoefficientData coeffs;
    for (int k = 0; k < n_coeff; ++k) {
      std::vector<double> w(static_cast<std::size_t>(ndof));
      for (double& x : w) x = u(rng);
      coeffs.push_back(std::move(w));
    }
    const NdArray via_program = interpret(program, map, coeffs);
    const NdArray reference = oracle_element_tensor(form, map, coeffs);
    double diff = 0.0, scale = reference.max_abs();
    for (std::size_t k = 0; k < reference.size(); ++k)
      diff = std::max(diff, std::abs(via_program[k] - reference[k]));
    if (scale > 0.0) max_rel = std::max(max_rel, diff / scale);
    else max_rel = std::max(max_rel, diff);
  }
  std::cout << "cells " << mesh.num_cells() << " max-relative-error " << fmt17(max_rel) << "\n";
  return max_rel > 1e-10 ? kExitVerification : kExitOk;
}

struct BenchCase {
  std::string path;
  int dim = 2;
  int qmin = 1;
  int qmax = 1;
};

std::vector<BenchCase> default_grid(const std::string& forms_dir) {
  auto f = [&](const char* name) { return (fs::path(forms_dir) / name).string(); };
  std::vector<BenchCase> grid;
  const std::pair<const char*, int> cases[] = {{"mass.form", 8},
                                               {"poisson.form", 8},
                                               {"navier_stokes.form", 3},
                                               {"elasticity.form", 3},
                                               {"stabilization.form", 1}};
  for (const auto& [name, qmax] : cases)
    for (int dim : {2, 3}) grid.push_back({f(name), dim, 1, qmax});
  return grid;
}

std::vector<BenchCase> load_grid(const std::string& spec_file) {
  std::vector<BenchCase> grid;
  std::istringstream is(read_file(spec_file));
  std::string line;
  while (std::getline(is, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    BenchCase c;
    if (ls >> c.path >> c.dim >> c.qmin >> c.qmax) grid.push_back(c);
  }
  return grid;
}

int cmd_bench(const std::string& spec_file, const std::string& forms_dir, const std::string& out_csv,
              int runs, std::uint64_t max_entries) {
  const std::vector<BenchCase> grid =
      spec_file.empty() ? default_grid(forms_dir) : load_grid(spec_file);

  std::ostringstream csv;
  csv << "form,dim,q,algorithm,seconds,multiplies,entries,speedup\n";
  for (const BenchCase& bc : grid) {
    const std::string source = read_file(bc.path);
    const std::string name = fs::path(bc.path).stem().string();
    for (int q = bc.qmin; q <= bc.qmax; ++q) {
      ElementOverride ov;
      ov.cell = bc.dim == 2 ? CellType::triangle : CellType::tetrahedron;
      ov.degree = q;
      Form form;
      try {
        form = parse_form(source, ov);
      } catch (const ParseError& e) {
        std::cerr << bc.path << ": " << e.what() << "\n";
        return kExitParse;
      }
      form.name = name;
      const Form simplified = simplify(form);
      const std::vector<LoweredMonomial> lowered = lower_form(simplified);

      ComputeOptions copts;
      copts.max_entries = max_entries;

      double seconds[2] = {0, 0};
      std::uint64_t multiplies[2] = {0, 0};
      std::uint64_t entries = 0;
      bool skipped = false;
      for (int alg = 0; alg < 2 && !skipped; ++alg) {
        std::vector<double> times;
        for (int run = 0; run < runs && !skipped; ++run) {
          std::uint64_t mults = 0, ents = 0;
          const auto t0 = std::chrono::steady_clock::now();
          try {
            for (const LoweredMonomial& lm : lowered) {
              const QuadratureRule rule = default_rule(lm.ref);
              const ComputeResult r = alg == 0 ? compute_naive(lm.ref, rule, copts)
                                               : compute_assembled(lm.ref, rule, copts);
              mults += r.multiply_count;
              ents += r.tensor.values.size();
            }
          } catch (const TensorSizeError& e) {
            std::cerr << name << " " << bc.dim << "D q=" << q << ": skipped, " << e.what() << "\n";
            skipped = true;
            break;
          }
          const auto t1 = std::chrono::steady_clock::now();
          times.push_back(std::chrono::duration<double>(t1 - t0).count());
          multiplies[alg] = mults;
          entries = ents;
        }
        if (skipped) break;
        std::sort(times.begin(), times.end());
        seconds[alg] = times[times.size() / 2]; // median
      }
      if (skipped) continue;
      const char* names[2] = {"naive", "assembled"};
      for (int alg = 0; alg < 2; ++alg) {
        csv << name << "," << bc.dim << "," << q << "," << names[alg] << "," << fmt17(seconds[alg])
            << "," << multiplies[alg] << "," << entries << ",";
        if (alg == 1 && seconds[1] > 0.0) csv << fmt17(seconds[0] / seconds[1]);
        csv << "\n";
      }
    }
  }
  if (out_csv.empty()) std::cout << csv.str();
  else write_file(out_csv, csv.str());
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ftc: a small compiler for multilinear variational forms"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* compile = app.add_subcommand("compile", "compile a .form file to .prog and .c.txt");
  std::string form_file, out_dir = ".";
  bool dump_signatures = false, dump_a0 = false;
  compile->add_option("form", form_file, "input .form file")->required();
  compile->add_option("-o,--output-dir", out_dir, "output directory");
  compile->add_option("--algorithm", flags.algorithm, "reference tensor algorithm")
      ->check(CLI::IsMember({"naive", "assembled"}));
  compile->add_option("--quad-degree", flags.quad_degree, "override the quadrature degree");
  compile->add_option("--max-entries", flags.max_entries, "reference tensor entry cap");
  compile->add_flag("--dump-signatures", dump_signatures, "print monomial signatures");
  compile->add_flag("--dump-a0", dump_a0, "write the reference tensors with axis metadata");

  auto* verify = app.add_subcommand("verify", "compare generated code against direct quadrature");
  std::string mesh_file, program_file;
  std::uint64_t seed = 0;
  verify->add_option("form", form_file, "input .form file")->required();
  verify->add_option("mesh", mesh_file, "mesh file")->required();
  verify->add_option("--program", program_file, "use a serialized .prog instead of compiling");
  verify->add_option("--seed", seed, "seed for the random coefficients");
  verify->add_option("--algorithm", flags.algorithm, "reference tensor algorithm")
      ->check(CLI::IsMember({"naive", "assembled"}));
  verify->add_option("--quad-degree", flags.quad_degree, "override the quadrature degree");
  verify->add_option("--max-entries", flags.max_entries, "reference tensor entry cap");

  auto* bench = app.add_subcommand("bench", "time both reference-tensor algorithms, emit CSV");
  std::string spec_file, forms_dir = "forms", out_csv;
  int runs = 3;
  std::uint64_t bench_max_entries = std::uint64_t(1) << 27;
  bench->add_option("--spec", spec_file, "text file of lines: form-path dim qmin qmax");
  bench->add_option("--forms-dir", forms_dir, "directory with the bundled forms (default grid)");
  bench->add_option("-o,--output", out_csv, "CSV output file (stdout if omitted)");
  bench->add_option("--runs", runs, "runs per measurement (median is reported)");
  bench->add_option("--max-entries", bench_max_entries, "reference tensor entry cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compile->parsed()) return cmd_compile(form_file, out_dir, flags, dump_signatures, dump_a0);
    if (verify->parsed()) return cmd_verify(form_file, mesh_file, program_file, seed, flags);
    if (bench->parsed()) return cmd_bench(spec_file, forms_dir, out_csv, runs, bench_max_entries);
  } catch (const ParseError& e) {
    std::cerr << form_file << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const TensorSizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMemoryGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
