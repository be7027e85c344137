#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "covpkit/rational.hpp"

namespace covpkit {

/// 1-based multi-index (i_1, ..., i_d).
using IndexTuple = std::vector<int>;

/// Extents of a dense array, one per dimension.
using Extents = std::vector<int>;

/// Row-major offset of `t` (last index fastest). Throws InputError naming the
/// offending coordinate when `t` is out of range or has the wrong length.
[[nodiscard]] std::size_t flatten_index(std::span<const int> t, std::span<const int> dims);

/// Inverse of flatten_index.
[[nodiscard]] IndexTuple unflatten_index(std::size_t offset, std::span<const int> dims);

/// Product of extents.
[[nodiscard]] std::size_t element_count(std::span<const int> dims);

/// Advances `t` to the next tuple in row-major order. Returns false after the
/// last tuple (and leaves `t` reset to all ones).
bool next_index(IndexTuple& t, std::span<const int> dims);

/// Dense d-dimensional array of exact rationals, row-major.
class CostTensor {
 public:
  CostTensor() = default;
  /// Zero tensor.
  explicit CostTensor(Extents dims);
  CostTensor(Extents dims, std::vector<Rational> data);

  /// n x n x ... x n zero tensor with `d` dimensions.
  static CostTensor cube(int d, int n);

  [[nodiscard]] const Extents& dims() const noexcept { return dims_; }
  [[nodiscard]] int order() const noexcept { return static_cast<int>(dims_.size()); }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] const std::vector<Rational>& data() const noexcept { return data_; }
  [[nodiscard]] std::vector<Rational>& data() noexcept { return data_; }

  /// True when every extent is the same.
  [[nodiscard]] bool is_cubic() const noexcept;
  /// The common extent; throws InputError when extents differ.
  [[nodiscard]] int extent() const;

  [[nodiscard]] const Rational& at(std::span<const int> t) const { return data_[flatten_index(t, dims_)]; }
  Rational& at(std::span<const int> t) { return data_[flatten_index(t, dims_)]; }
  [[nodiscard]] const Rational& operator[](std::size_t offset) const { return data_[offset]; }
  Rational& operator[](std::size_t offset) { return data_[offset]; }

  [[nodiscard]] bool is_zero() const;

  friend bool operator==(const CostTensor&, const CostTensor&) = default;

  CostTensor& operator+=(const CostTensor& rhs);
  CostTensor& operator-=(const CostTensor& rhs);
  friend CostTensor operator+(CostTensor lhs, const CostTensor& rhs) { return lhs += rhs; }
  friend CostTensor operator-(CostTensor lhs, const CostTensor& rhs) { return lhs -= rhs; }

 private:
  Extents dims_;
  std::vector<Rational> data_;
};

}  // namespace covpkit
