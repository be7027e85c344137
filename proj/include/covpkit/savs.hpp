#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "covpkit/matrix.hpp"
#include "covpkit/tensor.hpp"

namespace covpkit {

/// Sorted 1-based subset Q of {1..d} with 0 < |Q| < d.
using IndexSubset = std::vector<int>;

/// All s-subsets of {1..d} in lexicographic order.
[[nodiscard]] std::vector<IndexSubset> index_subsets(int d, int s);

/// Throws InputError unless Q is a strictly increasing proper nonempty subset of {1..d}.
void validate_subset(const IndexSubset& q, int d);

/// Subtuple of t at the positions in Q.
[[nodiscard]] IndexTuple project(std::span<const int> t, const IndexSubset& q);

struct Component {
  IndexSubset q;
  CostTensor values;  ///< s-dimensional, extents dims[q_1-1], ..., dims[q_s-1].
};

/// C as a sum of arrays each depending only on the coordinates in one Q.
struct Decomposition {
  int d = 0;
  int s = 0;
  Extents dims;
  std::vector<Component> components;  ///< One per Q, lexicographic in Q.

  /// Common extent; throws InputError if the extents differ.
  [[nodiscard]] int n() const;
};

/// Zero decomposition with the right component shapes.
[[nodiscard]] Decomposition zero_decomposition(const Extents& dims, int s);

/// Throws InputError unless D has one correctly shaped component per s-subset.
void validate_decomposition(const Decomposition& D);

/// c(t) = sum over Q of A^Q(project(t, Q)).
[[nodiscard]] CostTensor reconstruct(const Decomposition& D);

struct DecomposeResult {
  std::optional<Decomposition> decomposition;
  /// Non-membership proof, one entry per tensor offset: y with y^T A = 0
  /// and y . c != 0, where A is the incidence of offsets against unknowns.
  std::vector<Rational> certificate;

  [[nodiscard]] bool decomposable() const noexcept { return decomposition.has_value(); }
};

/// Exact membership test for SAVS(d, s, dims). Extents may differ (as in the
/// transportation problem); an all-equal extent of 1 is rejected.
[[nodiscard]] DecomposeResult decompose(const CostTensor& c, int s);

/// Checks a certificate produced by decompose against c: y^T A = 0 and y . c != 0.
[[nodiscard]] bool verify_certificate(const CostTensor& c, int s, std::span<const Rational> y);

struct ConstructiveResult {
  Decomposition decomposition;
  std::optional<IndexTuple> mismatch;  ///< First tuple (row-major) where reconstruction differs.

  [[nodiscard]] bool reconstructs() const noexcept { return !mismatch.has_value(); }
};

/// v_k(i) = c(1,..,i,..,1) - (d-1)/d c(1,..,1), i in position k.
[[nodiscard]] ConstructiveResult decompose_axial_constructive(const CostTensor& c);

/// a_k from the signed corner sums over {1,i_1} x ... x {1,i_d}: every
/// corner whose ones include position k contributes (-1)^(m+1)/m, m the
/// number of positions taken from the "1" side.
[[nodiscard]] ConstructiveResult decompose_planar_constructive(const CostTensor& c);

/// dim SAVS(d, s, n) by inclusion-exclusion over the subspaces V_Q.
[[nodiscard]] std::uint64_t savs_dimension(int d, int s, int n);

/// Rows are the flattened indicator arrays of {t : project(t, Q) = k}, for
/// every Q (lexicographic) and every s-tuple k (row-major).
[[nodiscard]] ExactMatrix savs_generator_matrix(int d, int s, int n);

}  // namespace covpkit
