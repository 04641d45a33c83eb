#include "ftc/cell.hpp"

#include <stdexcept>

namespace ftc {

ReferenceCell::ReferenceCell(CellType type) : type_(type), dim_(cell_dimension(type)) {
  vertices_.push_back({0.0, 0.0, 0.0});
  for (int i = 0; i < dim_; ++i) {
    Point v{0.0, 0.0, 0.0};
    v[i] = 1.0;
    vertices_.push_back(v);
  }
}

double ReferenceCell::volume() const {
  switch (dim_) {
  case 1: return 1.0;
  case 2: return 0.5;
  default: return 1.0 / 6.0;
  }
}

std::string ReferenceCell::name() const { return cell_name(type_); }

CellType cell_type_from_name(const std::string& name) {
  if (name == "interval") return CellType::interval;
  if (name == "triangle") return CellType::triangle;
  if (name == "tetrahedron") return CellType::tetrahedron;
  throw std::invalid_argument("unsupported cell: " + name);
}

int cell_dimension(CellType type) {
  switch (type) {
  case CellType::interval: return 1;
  case CellType::triangle: return 2;
  case CellType::tetrahedron: return 3;
  }
  throw std::logic_error("unknown cell type");
}

std::string cell_name(CellType type) {
  switch (type) {
  case CellType::interval: return "interval";
  case CellType::triangle: return "triangle";
  case CellType::tetrahedron: return "tetrahedron";
  }
  throw std::logic_error("unknown cell type");
}

} // namespace ftc
