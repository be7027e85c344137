#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "covpkit/covp.hpp"

namespace covpkit {

/// C -> C - B for an array B with the COVP; z is B's common objective value.
struct AdmissibleTransformation {
  CostTensor subtrahend;
  Rational index_z;
};

struct TransformResult {
  bool admissible = false;
  CostTensor reduced;
  Rational z;
  std::optional<SolutionWitness> refusal;  ///< B's witness pair when B lacks the COVP.
};

/// Checks B with the fastest exact test for s (axial exchange test, P_2, or
/// enumeration) and subtracts it. Throws InputError on shape mismatch and
/// when the (d,s)-AP has no feasible solution, BudgetExhausted when the
/// enumeration cannot finish.
[[nodiscard]] TransformResult apply_transformation(const CostTensor& c, const CostTensor& b, int s,
                                                   const SearchBudget& budget = SearchBudget::from_env());

struct AxialReduction {
  AdmissibleTransformation transformation;
  Decomposition vectors;  ///< Accumulated slice minima per axis.
  CostTensor reduced;     ///< C - B, nonnegative, every slice has minimum 0.
  int passes = 0;         ///< Including the final pass that changes nothing.
};

/// Subtracts slice minima axis by axis (1..d) until a full pass changes nothing.
[[nodiscard]] AxialReduction axial_reduction(const CostTensor& c);

enum class OptimalityCondition { none, nonnegativity, zero_objective };

struct OptimalityVerdict {
  bool optimal = false;
  Rational value;  ///< z when optimal.
  OptimalityCondition violated = OptimalityCondition::none;
  std::optional<IndexTuple> negative_entry;
  Rational reduced_objective;
};

/// F is optimal with value z when reduced >= 0 and reduced(F) = 0.
/// Throws InputError when F is not feasible.
[[nodiscard]] OptimalityVerdict certify_optimal(const CostTensor& reduced, const FeasibleSolution& f, const Rational& z);

/// Axial transportation instance: integer supplies per axis, equal totals.
struct TransportInstance {
  CostTensor costs;
  std::vector<std::vector<std::int64_t>> supplies;

  [[nodiscard]] std::int64_t total() const;
};

/// Throws InputError unless the supplies match the extents, are nonnegative and balanced.
void validate_transport(const TransportInstance& inst);

/// Integral flow x over the cost extents.
struct TransportPlan {
  Extents dims;
  std::vector<std::int64_t> flow;

  friend bool operator==(const TransportPlan&, const TransportPlan&) = default;
};

[[nodiscard]] bool is_feasible_plan(const TransportInstance& inst, const TransportPlan& plan);
[[nodiscard]] Rational plan_cost(const CostTensor& costs, const TransportPlan& plan);

struct TransportVerdict {
  CovpStatus status = CovpStatus::holds;  ///< Over integral plans.
  std::optional<Rational> common_value;
  /// Costs restricted to positive-supply indices are sum-decomposable; this
  /// decides the COVP of the continuous relaxation.
  bool sum_decomposable = false;
  std::vector<std::vector<int>> active;  ///< Positive-supply indices per axis (1-based).
  std::optional<Decomposition> decomposition;  ///< Over the active indices.
  std::vector<Rational> certificate;           ///< Non-membership proof over the active indices.
  std::optional<std::pair<TransportPlan, TransportPlan>> witness;
  std::optional<std::pair<Rational, Rational>> witness_values;

  [[nodiscard]] bool holds() const noexcept { return status == CovpStatus::holds; }
};

[[nodiscard]] TransportVerdict covp_check_axial_tp(const TransportInstance& inst);

/// Replaces each facility of supply t by t unit facilities with copied costs.
/// Throws InputError for a zero total.
[[nodiscard]] CostTensor blow_up(const TransportInstance& inst);

/// Greedy integral plan (north-west corner rule over d axes).
[[nodiscard]] TransportPlan northwest_plan(const TransportInstance& inst);

}  // namespace covpkit
