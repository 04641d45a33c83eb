#pragma once

#include "ftc/form.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace ftc {

class ParseError : public std::runtime_error {
public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Optional replacement of the element declared in the source (used by the
/// benchmark driver to sweep cells and degrees). A vector-valued
/// declaration stays vector-valued when the cell changes: its size follows
/// the new cell dimension.
struct ElementOverride {
  std::optional<CellType> cell;
  std::optional<int> degree;
};

/// Parse a .form source. Expected header lines, in any order before the
/// form expression:
///
///   element = Lagrange(degree, cell[, vector_size])
///   arguments = v, u
///   coefficients = w        (optional)
///   a = <expression>
///
/// The expression is a sum of products of decimal constants and factors
/// `name`, `name[idx]`, with repeated `.dx(idx)` for derivatives; each
/// product ends in the measure factor `dx`. An index is a letter or a
/// 0-based integer literal (fixed component/direction). A letter occurring
/// twice in a term is summed over its range. `#` starts a comment.
Form parse_form(const std::string& text, const ElementOverride& override_element = {});

} // namespace ftc
