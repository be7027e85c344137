#include "covpkit/tensor.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "covpkit/errors.hpp"

namespace covpkit {

std::size_t element_count(std::span<const int> dims) {
  std::size_t total = 1;
  for (int e : dims) {
    if (e < 0) throw InputError("negative extent");
    total *= static_cast<std::size_t>(e);
  }
  return total;
}

std::size_t flatten_index(std::span<const int> t, std::span<const int> dims) {
  if (t.size() != dims.size()) {
    throw InputError("index tuple has " + std::to_string(t.size()) + " coordinates, expected " +
                     std::to_string(dims.size()));
  }
  std::size_t offset = 0;
  for (std::size_t r = 0; r < dims.size(); ++r) {
    if (t[r] < 1 || t[r] > dims[r]) {
      throw InputError("coordinate " + std::to_string(r + 1) + " = " + std::to_string(t[r]) +
                       " is outside 1.." + std::to_string(dims[r]));
    }
    offset = offset * static_cast<std::size_t>(dims[r]) + static_cast<std::size_t>(t[r] - 1);
  }
  return offset;
}

IndexTuple unflatten_index(std::size_t offset, std::span<const int> dims) {
  if (offset >= element_count(dims)) throw InputError("offset " + std::to_string(offset) + " out of range");
  IndexTuple t(dims.size());
  for (std::size_t r = dims.size(); r-- > 0;) {
    auto e = static_cast<std::size_t>(dims[r]);
    t[r] = static_cast<int>(offset % e) + 1;
    offset /= e;
  }
  return t;
}

bool next_index(IndexTuple& t, std::span<const int> dims) {
  for (std::size_t r = dims.size(); r-- > 0;) {
    if (t[r] < dims[r]) {
      ++t[r];
      return true;
    }
    t[r] = 1;
  }
  return false;
}

CostTensor::CostTensor(Extents dims) : dims_(std::move(dims)), data_(element_count(dims_)) {}

CostTensor::CostTensor(Extents dims, std::vector<Rational> data) : dims_(std::move(dims)), data_(std::move(data)) {
  if (data_.size() != element_count(dims_)) {
    throw InputError("tensor data has " + std::to_string(data_.size()) + " entries, dims require " +
                     std::to_string(element_count(dims_)));
  }
}

CostTensor CostTensor::cube(int d, int n) {
  if (d < 1 || n < 1) throw InputError("cube needs d >= 1 and n >= 1");
  return CostTensor(Extents(static_cast<std::size_t>(d), n));
}

bool CostTensor::is_cubic() const noexcept {
  return std::adjacent_find(dims_.begin(), dims_.end(), std::not_equal_to<>()) == dims_.end();
}

int CostTensor::extent() const {
  if (dims_.empty() || !is_cubic()) throw InputError("tensor extents are not all equal");
  return dims_.front();
}

bool CostTensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x.is_zero(); });
}

CostTensor& CostTensor::operator+=(const CostTensor& rhs) {
  if (dims_ != rhs.dims_) throw InputError("tensor shapes differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

CostTensor& CostTensor::operator-=(const CostTensor& rhs) {
  if (dims_ != rhs.dims_) throw InputError("tensor shapes differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

}  // namespace covpkit
