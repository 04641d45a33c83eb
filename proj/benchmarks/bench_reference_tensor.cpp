// Microbenchmarks for the two reference-tensor algorithms across the
// bundled forms. Run with --benchmark_filter to narrow the set.

#include "ftc/lowering.hpp"
#include "ftc/parser.hpp"
#include "ftc/reference_tensor.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ftc;

std::string element_line(CellType cell, int q, bool vector) {
  std::string s = "element = Lagrange(" + std::to_string(q) + ", " + cell_name(cell);
  if (vector) s += ", " + std::to_string(cell_dimension(cell));
  return s + ")\n";
}

Form form_of(const std::string& which, CellType cell, int q) {
  if (which == "mass")
    return parse_form(element_line(cell, q, false) + "arguments = v, u\na = v*u*dx\n");
  if (which == "poisson")
    return parse_form(element_line(cell, q, false) + "arguments = v, u\na = v.dx(i)*u.dx(i)*dx\n");
  if (which == "navier_stokes")
    return parse_form(element_line(cell, q, true) +
                      "arguments = v, u\ncoefficients = w\na = v[i]*w[j]*u[i].dx(j)*dx\n");
  return parse_form(element_line(cell, q, true) +
                    "arguments = v, u\ncoefficients = w\na = w[j]*v[i].dx(j)*w[k]*u[i].dx(k)*dx\n");
}

void run_case(benchmark::State& state, const std::string& which, CellType cell, Algorithm alg) {
  const int q = static_cast<int>(state.range(0));
  const Form form = simplify(form_of(which, cell, q));
  std::vector<LoweredMonomial> lowered = lower_form(form);
  std::uint64_t entries = 0, multiplies = 0;
  for (auto _ : state) {
    entries = 0;
    multiplies = 0;
    for (const LoweredMonomial& lm : lowered) {
      const QuadratureRule rule = default_rule(lm.ref);
      const ComputeResult r =
          alg == Algorithm::naive ? compute_naive(lm.ref, rule) : compute_assembled(lm.ref, rule);
      benchmark::DoNotOptimize(r.tensor.values.data());
      entries += r.tensor.values.size();
      multiplies += r.multiply_count;
    }
  }
  state.counters["entries"] = static_cast<double>(entries);
  state.counters["multiplies"] = static_cast<double>(multiplies);
}

void BM_mass2d_naive(benchmark::State& s) { run_case(s, "mass", CellType::triangle, Algorithm::naive); }
void BM_mass2d_assembled(benchmark::State& s) { run_case(s, "mass", CellType::triangle, Algorithm::assembled); }
void BM_poisson3d_naive(benchmark::State& s) { run_case(s, "poisson", CellType::tetrahedron, Algorithm::naive); }
void BM_poisson3d_assembled(benchmark::State& s) { run_case(s, "poisson", CellType::tetrahedron, Algorithm::assembled); }
void BM_convection3d_naive(benchmark::State& s) { run_case(s, "navier_stokes", CellType::tetrahedron, Algorithm::naive); }
void BM_convection3d_assembled(benchmark::State& s) { run_case(s, "navier_stokes", CellType::tetrahedron, Algorithm::assembled); }
void BM_stabilization3d_naive(benchmark::State& s) { run_case(s, "stabilization", CellType::tetrahedron, Algorithm::naive); }
void BM_stabilization3d_assembled(benchmark::State& s) { run_case(s, "stabilization", CellType::tetrahedron, Algorithm::assembled); }

} // namespace

BENCHMARK(BM_mass2d_naive)->DenseRange(1, 8);
BENCHMARK(BM_mass2d_assembled)->DenseRange(1, 8);
BENCHMARK(BM_poisson3d_naive)->DenseRange(1, 4);
BENCHMARK(BM_poisson3d_assembled)->DenseRange(1, 4);
BENCHMARK(BM_convection3d_naive)->DenseRange(1, 2);
BENCHMARK(BM_convection3d_assembled)->DenseRange(1, 2);
BENCHMARK(BM_stabilization3d_naive)->Arg(1);
BENCHMARK(BM_stabilization3d_assembled)->Arg(1);

BENCHMARK_MAIN();
