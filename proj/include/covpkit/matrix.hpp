#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "covpkit/rational.hpp"

namespace covpkit {

/// Dense row-major matrix of exact rationals.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  [[nodiscard]] std::span<const Rational> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<Rational> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }

  /// Rows and columns selected by (sorted or unsorted) index lists.
  [[nodiscard]] ExactMatrix submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

  ExactMatrix& operator+=(const ExactMatrix& rhs);
  ExactMatrix& operator-=(const ExactMatrix& rhs);
  ExactMatrix& operator*=(const Rational& scalar);
  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator*(ExactMatrix a, const Rational& s) { return a *= s; }
  friend ExactMatrix operator*(const Rational& s, ExactMatrix a) { return a *= s; }
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

/// [a b ...] side by side; all blocks must share the row count.
ExactMatrix hconcat(std::initializer_list<std::reference_wrapper<const ExactMatrix>> blocks);
/// Blocks stacked vertically; all blocks must share the column count.
ExactMatrix vconcat(std::initializer_list<std::reference_wrapper<const ExactMatrix>> blocks);

/// Sparse row as (column, value) pairs sorted by column, no explicit zeros.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

/// Incrementally maintained reduced row echelon basis of a row space.
///
/// Pivots are chosen as the first nonzero column of each residual, so the
/// basis depends only on the order rows are inserted. With tracking enabled,
/// every basis row and every residual also carries its expression as a
/// combination of the inserted rows (indexed by insertion order).
class RowSpace {
 public:
  struct Insertion {
    bool independent = false;
    std::size_t pivot = 0;  ///< Column of the residual's leading entry.
    Rational pivot_value;   ///< Leading entry before normalisation.
    SparseRow combination;  ///< Residual as a combination of inserted rows (tracking only).
  };

  explicit RowSpace(std::size_t cols, bool track_combinations = false);

  Insertion insert(std::span<const Rational> row);

  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t rank() const noexcept { return basis_.size(); }
  [[nodiscard]] std::size_t inserted() const noexcept { return inserted_; }
  [[nodiscard]] const std::vector<SparseRow>& basis() const noexcept { return basis_; }
  [[nodiscard]] const std::vector<std::size_t>& pivots() const noexcept { return pivot_col_; }

 private:
  std::size_t cols_;
  bool track_;
  std::size_t inserted_ = 0;
  std::vector<SparseRow> basis_;
  std::vector<SparseRow> combos_;
  std::vector<std::size_t> pivot_col_;
  std::vector<std::ptrdiff_t> row_of_pivot_;
};

/// Exact rank over the rationals, by sparse Gauss-Jordan elimination.
[[nodiscard]] std::size_t rank(const ExactMatrix& m);

/// Exact rank by fraction-free (Bareiss) elimination on an integer-scaled copy.
[[nodiscard]] std::size_t rank_bareiss(const ExactMatrix& m);

/// Exact determinant by Bareiss elimination. Throws InputError if not square.
[[nodiscard]] Rational determinant(const ExactMatrix& m);

struct LinearSolution {
  bool consistent = false;
  std::vector<Rational> particular;           ///< Free variables set to zero.
  std::vector<std::vector<Rational>> kernel;  ///< Basis of {x : Ax = 0}.
  /// When inconsistent: y with y^T A = 0 and y^T b != 0.
  std::vector<Rational> certificate;
};

/// Solves A x = b exactly. Throws InputError when b's length differs from A's rows.
[[nodiscard]] LinearSolution solve_linear(const ExactMatrix& a, std::span<const Rational> b, bool want_kernel = true);

}  // namespace covpkit
