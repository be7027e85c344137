#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "covpkit/tensor.hpp"

namespace covpkit {

/// A feasible solution of the (d,s)-AP: n^s tuples, stored flat and sorted
/// lexicographically.
class FeasibleSolution {
 public:
  FeasibleSolution() = default;
  /// Sorts the tuples. Does not check feasibility.
  FeasibleSolution(int d, int s, int n, std::vector<IndexTuple> tuples);
  /// `coords` must already hold sorted tuples back to back.
  static FeasibleSolution from_sorted(int d, int s, int n, std::vector<int> coords);

  [[nodiscard]] int d() const noexcept { return d_; }
  [[nodiscard]] int s() const noexcept { return s_; }
  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return d_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(d_); }
  [[nodiscard]] std::span<const int> tuple(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  [[nodiscard]] std::vector<IndexTuple> tuples() const;
  [[nodiscard]] const std::vector<int>& coords() const noexcept { return coords_; }

  friend bool operator==(const FeasibleSolution&, const FeasibleSolution&) = default;
  /// Canonical order: lexicographic on the sorted tuple lists.
  friend bool operator<(const FeasibleSolution& a, const FeasibleSolution& b) { return a.coords_ < b.coords_; }

 private:
  int d_ = 0;
  int s_ = 0;
  int n_ = 0;
  std::vector<int> coords_;
};

/// n x n grid over {1..n}, row-major.
struct LatinSquare {
  int n = 0;
  std::vector<int> grid;

  [[nodiscard]] int at(int r, int c) const { return grid[static_cast<std::size_t>((r - 1) * n + (c - 1))]; }
  [[nodiscard]] bool valid() const;
};

/// Reads the first two coordinates as (row, column) and the third as the symbol.
[[nodiscard]] LatinSquare latin_square_of(const FeasibleSolution& f);

struct SearchBudget {
  std::uint64_t max_nodes = 200'000'000;
  std::uint64_t max_solutions = 300'000;

  /// Defaults, with max_nodes taken from COVPKIT_MAX_NODES when set.
  static SearchBudget from_env();
  static SearchBudget unlimited();
};

struct StreamStatus {
  bool complete = true;  ///< Search tree exhausted.
  bool stopped = false;  ///< Visitor asked to stop.
  std::uint64_t nodes = 0;
  std::uint64_t emitted = 0;
};

/// Return false to stop the search early.
using SolutionVisitor = std::function<bool(const FeasibleSolution&)>;

struct EnumerationResult {
  std::vector<FeasibleSolution> solutions;
  bool complete = true;
  std::uint64_t nodes = 0;
};

// Streaming enumerators. All emit solutions in canonical order.

/// (d,1)-AP: one (d-1)-tuple of unused values per first coordinate.
StreamStatus stream_axial(int d, int n, const SearchBudget& budget, const SolutionVisitor& visit);
/// (d,d-1)-AP as Latin hypercubes {1..n}^{d-1} -> {1..n}.
StreamStatus stream_planar(int d, int n, const SearchBudget& budget, const SolutionVisitor& visit);
/// (d,2)-AP as (d-2)-tuples of mutually orthogonal Latin squares.
StreamStatus stream_mols(int d, int n, const SearchBudget& budget, const SolutionVisitor& visit);
/// Generic orthogonal-array backtracking for any 0 < s < d.
StreamStatus stream_oa_backtrack(int d, int s, int n, const SearchBudget& budget, const SolutionVisitor& visit);
/// Dispatches on s to the specialised enumerators.
StreamStatus stream_general(int d, int s, int n, const SearchBudget& budget, const SolutionVisitor& visit);

[[nodiscard]] EnumerationResult enumerate_axial(int d, int n, const SearchBudget& budget = SearchBudget::from_env());
[[nodiscard]] EnumerationResult enumerate_planar(int d, int n, const SearchBudget& budget = SearchBudget::from_env());
[[nodiscard]] EnumerationResult enumerate_mols(int d, int n, const SearchBudget& budget = SearchBudget::from_env());
[[nodiscard]] EnumerationResult enumerate_oa_backtrack(int d, int s, int n,
                                                       const SearchBudget& budget = SearchBudget::from_env());
[[nodiscard]] EnumerationResult enumerate_general(int d, int s, int n,
                                                  const SearchBudget& budget = SearchBudget::from_env());

/// Every constraint class T(Q,t) holds exactly one tuple, and |F| = n^s.
[[nodiscard]] bool is_feasible_solution(const FeasibleSolution& f);

/// Sum of C over the tuples of F. Throws InputError on shape mismatch.
[[nodiscard]] Rational objective(const CostTensor& c, const FeasibleSolution& f);

/// n^e, throwing InputError if it does not fit comfortably in memory-sized integers.
[[nodiscard]] std::size_t int_power(int n, int e);

}  // namespace covpkit
