#include "ftc/ndarray.hpp"

#include <cmath>
#include <stdexcept>

namespace ftc {

NdArray::NdArray(std::vector<int> shape) : shape_(std::move(shape)) {
  strides_.assign(shape_.size(), 1);
  std::size_t n = 1;
  for (std::size_t k = shape_.size(); k-- > 0;) {
    strides_[k] = n;
    n *= static_cast<std::size_t>(shape_[k]);
  }
  data_.assign(n, 0.0);
}

std::size_t NdArray::flat_index(std::span<const int> multi) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < shape_.size(); ++k) off += static_cast<std::size_t>(multi[k]) * strides_[k];
  return off;
}

double NdArray::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

std::uint64_t NdArray::entry_count(std::span<const int> shape) {
  std::uint64_t n = 1;
  for (int s : shape) n *= static_cast<std::uint64_t>(s);
  return n;
}

NdArray permute_axes(const NdArray& in, std::span<const int> axis_map) {
  if (axis_map.size() != in.shape().size()) throw std::invalid_argument("permute_axes: rank mismatch");
  std::vector<int> out_shape(axis_map.size());
  for (std::size_t k = 0; k < axis_map.size(); ++k)
    out_shape[k] = in.shape()[static_cast<std::size_t>(axis_map[k])];
  NdArray out(out_shape);
  if (out.size() == 0) return out;
  // walk the output in row-major order, carrying the input offset
  std::vector<int> multi(axis_map.size(), 0);
  std::vector<std::size_t> in_stride(axis_map.size());
  for (std::size_t k = 0; k < axis_map.size(); ++k)
    in_stride[k] = in.strides()[static_cast<std::size_t>(axis_map[k])];
  std::size_t out_flat = 0;
  std::size_t in_off = 0;
  for (;;) {
    out[out_flat++] = in[in_off];
    std::size_t k = axis_map.size();
    for (;;) {
      if (k == 0) return out;
      --k;
      in_off += in_stride[k];
      if (++multi[k] < out_shape[k]) break;
      in_off -= in_stride[k] * static_cast<std::size_t>(out_shape[k]);
      multi[k] = 0;
    }
  }
}

bool next_multi_index(std::vector<int>& multi, std::span<const int> shape) {
  std::size_t k = shape.size();
  while (k-- > 0) {
    if (++multi[k] < shape[k]) return true;
    multi[k] = 0;
  }
  return false;
}

} // namespace ftc
