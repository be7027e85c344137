#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covpkit/enumerate.hpp"
#include "covpkit/matrix.hpp"
#include "covpkit/savs.hpp"

namespace covpkit {

enum class CovpStatus { holds, fails, vacuous };

[[nodiscard]] const char* to_string(CovpStatus s) noexcept;

/// Two feasible solutions with different objective values.
struct SolutionWitness {
  FeasibleSolution first;
  FeasibleSolution second;
  Rational first_value;
  Rational second_value;
};

struct CovpVerdict {
  CovpStatus status = CovpStatus::holds;
  /// The enumeration behind this verdict stopped on its budget.
  bool provisional = false;
  std::optional<Rational> common_value;
  std::optional<SolutionWitness> witness;
  std::uint64_t solutions_checked = 0;
  /// Offending tuple: the P_2 corner (i_1..i_d) or the first reconstruction mismatch.
  std::optional<IndexTuple> violation;
  /// Decomposition found along the way, when the method produces one.
  std::optional<Decomposition> decomposition;
  /// Whether C itself is sum-decomposable, when the method decides it.
  std::optional<bool> sum_decomposable;

  [[nodiscard]] bool holds() const noexcept { return status == CovpStatus::holds; }
};

/// Enumerates every feasible solution and compares objectives. The first
/// pair of differing solutions in canonical order is the witness. `workers`
/// caps the threads used to evaluate objectives; the verdict does not
/// depend on it.
[[nodiscard]] CovpVerdict covp_check_bruteforce(const CostTensor& c, int s,
                                                const SearchBudget& budget = SearchBudget::from_env(),
                                                unsigned workers = 1);

/// Alternating corner sums over every {1,i_1} x ... x {1,i_d}. Decides the
/// COVP of the (d,d-1)-AP; failures carry two explicit solutions.
[[nodiscard]] CovpVerdict covp_check_planar_p2(const CostTensor& c);

/// Axial (d,1)-AP test. The closed-form decomposition settles the positive
/// case; otherwise single-axis exchanges between two tuples are searched,
/// which decides the COVP exactly (every pair of solutions is connected by
/// such exchanges).
[[nodiscard]] CovpVerdict covp_check_axial_fast(const CostTensor& c);

/// The two solutions of the axial problem that agree except for exchanging
/// coordinate `axis` (0-based) between tuples x and y (x, y differ everywhere). The
/// other n-2 tuples take the remaining values of each axis in increasing order.
[[nodiscard]] std::pair<FeasibleSolution, FeasibleSolution> axial_exchange_pair(int n, std::span<const int> x,
                                                                                 std::span<const int> y, int axis);

struct IncidenceMatrix {
  ExactMatrix matrix;
  std::vector<FeasibleSolution> rows;
  int d = 0;
  int n = 0;
};

/// Rows follow the given solution order, columns the row-major tuple order.
[[nodiscard]] IncidenceMatrix build_incidence(const std::vector<FeasibleSolution>& solutions, int d, int n);

/// n^d + 1 - rank([M | 1]). Throws BudgetExhausted when enumeration is incomplete.
[[nodiscard]] std::uint64_t covp_space_dimension(int d, int s, int n,
                                                 const SearchBudget& budget = SearchBudget::from_env());

struct BlockTriple {
  ExactMatrix a, b, c;
};

/// A_k, B_k, C_k: 3 * 2^k rows and 3^(k+1) columns.
[[nodiscard]] BlockTriple build_blocks(int k);
/// M_d = A_{d-1}, the incidence matrix of the planar problem at n = 3.
[[nodiscard]] ExactMatrix build_Md(int d);
/// A'_k, B'_k, C'_k from the block recursion on the primed base cases.
[[nodiscard]] BlockTriple build_reduced(int k);
/// The same primed matrices obtained by deleting rows of A_k, B_k, C_k whose
/// 1-based index is divisible by 3 and keeping the columns whose base-3
/// digits are all 0 or 1.
[[nodiscard]] BlockTriple build_reduced_by_deletion(int k);
/// Square (2^d + 1) submatrix of M_d: the rows and columns of A'_{d-1} plus row 3 and column 3.
[[nodiscard]] ExactMatrix build_Md_prime(int d);

struct DetSequence {
  int k_max = 0;
  std::vector<Rational> z, u, v;                    ///< Direct determinants, k = 0..k_max.
  std::vector<Rational> z_rec, u_rec, v_rec;        ///< Recursion seeded from the direct k = 0 values.
  bool recursion_consistent = true;
  bool magnitudes_consistent = true;                ///< |z_k| and |u_k| closed forms for k >= 2.
  bool z_nonzero = true;
};

[[nodiscard]] DetSequence det_sequence(int k_max);

struct RankReport {
  int d = 0;
  std::size_t rank = 0;
  std::size_t expected = 0;
  Rational det_Md_prime;
  bool matches_incidence = false;  ///< Only evaluated when requested.
};

/// rank(M_d) against 2^d + 1, with det M'_d. When `compare_incidence` is set,
/// also checks M_d against the incidence matrix of the planar enumeration up to row order.
[[nodiscard]] RankReport verify_rank_Md(int d, bool compare_incidence = false);

/// The 3 x 3 x 3 x 3 array with ones at the tuples of {1,2}^4 holding an
/// odd number of 2s, and at (3,3,3,3).
[[nodiscard]] CostTensor counterexample_array();

struct ConjectureReport {
  int d = 0, s = 0, n = 0;
  bool complete = false;
  std::uint64_t covp_dim = 0;
  std::uint64_t savs_dim = 0;
  [[nodiscard]] bool equal() const noexcept { return complete && covp_dim == savs_dim; }
};

/// Never throws on budget exhaustion; reports complete = false instead.
[[nodiscard]] ConjectureReport conjecture_experiment(int d, int s, int n,
                                                     const SearchBudget& budget = SearchBudget::from_env());

}  // namespace covpkit
