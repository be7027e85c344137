#include "covpkit/matrix.hpp"

#include <algorithm>
#include <string>

#include "covpkit/errors.hpp"

namespace covpkit {
namespace {

// target += factor * src, merging two sorted sparse rows and dropping zeros.
void sparse_axpy(SparseRow& target, const Rational& factor, const SparseRow& src) {
  if (factor.is_zero() || src.empty()) return;
  SparseRow out;
  out.reserve(target.size() + src.size());
  auto a = target.begin();
  auto b = src.begin();
  while (a != target.end() || b != src.end()) {
    if (b == src.end() || (a != target.end() && a->first < b->first)) {
      out.push_back(std::move(*a));
      ++a;
    } else if (a == target.end() || b->first < a->first) {
      out.emplace_back(b->first, factor * b->second);
      ++b;
    } else {
      Rational v = std::move(a->second);
      add_product(v, factor, b->second);
      if (!v.is_zero()) out.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  target = std::move(out);
}

const Rational* sparse_find(const SparseRow& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& entry, std::size_t c) { return entry.first < c; });
  if (it == row.end() || it->first != col) return nullptr;
  return &it->second;
}

// Multiplies each row by the lcm of its denominators. Returns the product of
// the multipliers so determinants can be rescaled.
Rational integerize_rows(ExactMatrix& m) {
  Rational scale(1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class lcm(1);
    for (const Rational& x : m.row(r)) {
      if (!x.is_integer()) {
        mpz_class den = x.to_mpq().get_den();
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
      }
    }
    if (lcm != 1) {
      Rational factor{mpq_class(lcm)};
      for (Rational& x : m.row(r)) x *= factor;
      scale *= factor;
    }
  }
  return scale;
}

struct BareissResult {
  std::size_t rank = 0;
  int swaps = 0;
  Rational last_pivot{1};
};

BareissResult bareiss_in_place(ExactMatrix& a) {
  BareissResult res;
  Rational prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
      ++res.swaps;
    }
    const Rational pivot = a(r, c);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      const Rational lead = a(i, c);
      for (std::size_t j = c + 1; j < a.cols(); ++j) {
        Rational v = pivot * a(i, j);
        if (!lead.is_zero()) v -= lead * a(r, j);
        if (!v.is_zero()) v /= prev;
        a(i, j) = std::move(v);
      }
      a(i, c) = Rational(0);
    }
    prev = pivot;
    res.last_pivot = pivot;
    ++r;
  }
  res.rank = r;
  return res;
}

}  // namespace

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
  return m;
}

ExactMatrix ExactMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  ExactMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InputError("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

ExactMatrix ExactMatrix::submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  ExactMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(rows[i], cols[j]);
  }
  return out;
}

ExactMatrix& ExactMatrix::operator+=(const ExactMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InputError("matrix shapes differ");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

ExactMatrix& ExactMatrix::operator-=(const ExactMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InputError("matrix shapes differ");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

ExactMatrix& ExactMatrix::operator*=(const Rational& scalar) {
  for (Rational& x : entries_) x *= scalar;
  return *this;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
  ExactMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) add_product(out(i, j), x, b(k, j));
    }
  }
  return out;
}

ExactMatrix hconcat(std::initializer_list<std::reference_wrapper<const ExactMatrix>> blocks) {
  std::size_t rows = blocks.size() == 0 ? 0 : blocks.begin()->get().rows();
  std::size_t cols = 0;
  for (const ExactMatrix& b : blocks) {
    if (b.rows() != rows) throw InputError("hconcat: row counts differ");
    cols += b.cols();
  }
  ExactMatrix out(rows, cols);
  std::size_t offset = 0;
  for (const ExactMatrix& b : blocks) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, offset + j) = b(i, j);
    }
    offset += b.cols();
  }
  return out;
}

ExactMatrix vconcat(std::initializer_list<std::reference_wrapper<const ExactMatrix>> blocks) {
  std::size_t cols = blocks.size() == 0 ? 0 : blocks.begin()->get().cols();
  std::size_t rows = 0;
  for (const ExactMatrix& b : blocks) {
    if (b.cols() != cols) throw InputError("vconcat: column counts differ");
    rows += b.rows();
  }
  ExactMatrix out(rows, cols);
  std::size_t offset = 0;
  for (const ExactMatrix& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) out(offset + i, j) = b(i, j);
    }
    offset += b.rows();
  }
  return out;
}

RowSpace::RowSpace(std::size_t cols, bool track_combinations)
    : cols_(cols), track_(track_combinations), row_of_pivot_(cols, -1) {}

RowSpace::Insertion RowSpace::insert(std::span<const Rational> row) {
  if (row.size() != cols_) throw InputError("row length does not match the row space");
  std::vector<Rational> work(row.begin(), row.end());
  SparseRow combination;
  if (track_) combination.emplace_back(inserted_, Rational(1));

  for (std::size_t c = 0; c < cols_; ++c) {
    if (work[c].is_zero() || row_of_pivot_[c] < 0) continue;
    auto r = static_cast<std::size_t>(row_of_pivot_[c]);
    const Rational factor = -work[c];
    for (const auto& [idx, val] : basis_[r]) add_product(work[idx], factor, val);
    if (track_) sparse_axpy(combination, factor, combos_[r]);
  }
  ++inserted_;

  Insertion result;
  auto lead = std::find_if(work.begin(), work.end(), [](const Rational& x) { return !x.is_zero(); });
  if (lead == work.end()) {
    result.combination = std::move(combination);
    return result;
  }
  result.independent = true;
  result.pivot = static_cast<std::size_t>(lead - work.begin());
  result.pivot_value = *lead;
  if (track_) result.combination = combination;

  const Rational inverse = Rational(1) / result.pivot_value;
  SparseRow fresh;
  for (std::size_t c = result.pivot; c < cols_; ++c) {
    if (!work[c].is_zero()) fresh.emplace_back(c, work[c] * inverse);
  }
  if (track_) {
    for (auto& entry : combination) entry.second *= inverse;
  }

  for (std::size_t r = 0; r < basis_.size(); ++r) {
    const Rational* hit = sparse_find(basis_[r], result.pivot);
    if (hit == nullptr) continue;
    const Rational factor = -*hit;
    sparse_axpy(basis_[r], factor, fresh);
    if (track_) sparse_axpy(combos_[r], factor, combination);
  }
  row_of_pivot_[result.pivot] = static_cast<std::ptrdiff_t>(basis_.size());
  pivot_col_.push_back(result.pivot);
  basis_.push_back(std::move(fresh));
  if (track_) combos_.push_back(std::move(combination));
  return result;
}

std::size_t rank(const ExactMatrix& m) {
  RowSpace space(m.cols());
  for (std::size_t r = 0; r < m.rows() && space.rank() < m.cols(); ++r) space.insert(m.row(r));
  return space.rank();
}

std::size_t rank_bareiss(const ExactMatrix& m) {
  ExactMatrix work = m;
  integerize_rows(work);
  return bareiss_in_place(work).rank;
}

Rational determinant(const ExactMatrix& m) {
  if (!m.is_square()) {
    throw InputError("determinant of a non-square " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " matrix");
  }
  if (m.rows() == 0) return Rational(1);
  ExactMatrix work = m;
  Rational scale = integerize_rows(work);
  BareissResult res = bareiss_in_place(work);
  if (res.rank < m.rows()) return Rational(0);
  Rational det = res.last_pivot / scale;
  return res.swaps % 2 == 0 ? det : -det;
}

LinearSolution solve_linear(const ExactMatrix& a, std::span<const Rational> b, bool want_kernel) {
  if (b.size() != a.rows()) {
    throw InputError("right-hand side has " + std::to_string(b.size()) + " entries, matrix has " +
                     std::to_string(a.rows()) + " rows");
  }
  const std::size_t n = a.cols();
  auto augmented = [&](std::size_t r) {
    std::vector<Rational> row(a.row(r).begin(), a.row(r).end());
    row.push_back(b[r]);
    return row;
  };

  RowSpace space(n + 1);
  std::optional<std::size_t> bad_row;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto ins = space.insert(augmented(r));
    if (ins.independent && ins.pivot == n) {
      bad_row = r;
      break;
    }
  }

  LinearSolution out;
  if (bad_row) {
    // Replay the prefix with provenance tracking to extract y.
    RowSpace tracked(n + 1, true);
    RowSpace::Insertion last;
    for (std::size_t r = 0; r <= *bad_row; ++r) last = tracked.insert(augmented(r));
    if (!last.independent || last.pivot != n) throw InternalError("solve_linear: replay diverged");
    out.certificate.assign(a.rows(), Rational(0));
    for (const auto& [idx, val] : last.combination) out.certificate[idx] = val;
    return out;
  }

  out.consistent = true;
  out.particular.assign(n, Rational(0));
  std::vector<bool> is_pivot(n, false);
  for (std::size_t i = 0; i < space.rank(); ++i) {
    std::size_t p = space.pivots()[i];
    is_pivot[p] = true;
    if (const Rational* rhs = sparse_find(space.basis()[i], n)) out.particular[p] = *rhs;
  }
  if (want_kernel) {
    std::vector<std::ptrdiff_t> kernel_of(n, -1);
    for (std::size_t c = 0; c < n; ++c) {
      if (is_pivot[c]) continue;
      kernel_of[c] = static_cast<std::ptrdiff_t>(out.kernel.size());
      std::vector<Rational> v(n, Rational(0));
      v[c] = Rational(1);
      out.kernel.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < space.rank(); ++i) {
      std::size_t p = space.pivots()[i];
      for (const auto& [idx, val] : space.basis()[i]) {
        if (idx == p || idx >= n) continue;
        out.kernel[static_cast<std::size_t>(kernel_of[idx])][p] = -val;
      }
    }
  }
  return out;
}

}  // namespace covpkit
