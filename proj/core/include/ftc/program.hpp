#pragma once

#include "ftc/compile.hpp"
#include "ftc/geometry.hpp"

#include <string>
#include <vector>

namespace ftc {

/// One product term of a geometry-tensor component: CONST x DETF x
/// JINV(r,c)... x COEFF(which,dof)... All indices are concrete; sums over
/// geometry-local assignments and over group members are expanded into
/// separate terms.
struct ProgramTerm {
  double constant = 1.0;
  std::vector<std::pair<int, int>> jinv;  // (reference row, physical column), 0-based
  std::vector<std::pair<int, int>> coeff; // (coefficient ordinal, local dof)
};

struct ProgramGroup {
  std::vector<int> primary_shape;
  std::vector<int> secondary_shape;
  std::vector<double> a0;                    // |I| x |A| row-major
  std::vector<std::vector<ProgramTerm>> g;   // per flattened secondary index
  std::vector<std::vector<int>> schedule;    // per output entry: kept alpha list
};

/// Serializable, executable artifact of compilation: flattened reference
/// tensors, geometry recipes and a zero-skipped contraction schedule.
struct ContractionProgram {
  std::string form_name;
  CellType cell = CellType::triangle;
  int dim = 0;
  std::vector<int> output_shape;
  int num_coefficients = 0;
  int coefficient_dim = 0;
  double epsilon_zero = 1e-12; // relative to max |A0| per group
  std::vector<ProgramGroup> groups;

  std::uint64_t scheduled_multiplies() const;
};

ContractionProgram generate(const CompiledForm& compiled, double epsilon_zero = 1e-12);

/// Reference interpreter; matches contract() within 1e-12 relative.
NdArray interpret(const ContractionProgram& program, const AffineMap& map,
                  const CoefficientData& coeffs);

/// Deterministic C-like rendering of the program (byte-stable).
std::string render_c_like(const ContractionProgram& program);

/// Self-describing text serialization (byte-stable).
std::string serialize(const ContractionProgram& program);
ContractionProgram parse_program(const std::string& text);

} // namespace ftc
