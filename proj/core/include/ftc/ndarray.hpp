#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ftc {

/// Dense row-major array of doubles with a runtime shape.
class NdArray {
public:
  NdArray() = default;
  explicit NdArray(std::vector<int> shape);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& strides() const { return strides_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& at(std::span<const int> multi) { return data_[flat_index(multi)]; }
  double at(std::span<const int> multi) const { return data_[flat_index(multi)]; }
  double& at(std::initializer_list<int> multi) { return at(std::span<const int>(multi.begin(), multi.size())); }
  double at(std::initializer_list<int> multi) const {
    return static_cast<const NdArray&>(*this).at(std::span<const int>(multi.begin(), multi.size()));
  }

  std::size_t flat_index(std::span<const int> multi) const;

  double max_abs() const;

  /// Total number of entries for a shape, without allocating.
  static std::uint64_t entry_count(std::span<const int> shape);

private:
  std::vector<int> shape_;
  std::vector<std::size_t> strides_;
  std::vector<double> data_;
};

/// out[m] = in[m'] with m'[k] = m[axis_map[k]]: axis k of the result is
/// axis axis_map[k] of the input. axis_map must be a permutation.
NdArray permute_axes(const NdArray& in, std::span<const int> axis_map);

/// Row-major odometer step. Returns false after the last multi-index.
bool next_multi_index(std::vector<int>& multi, std::span<const int> shape);

} // namespace ftc
