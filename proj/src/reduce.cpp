#include "covpkit/reduce.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "covpkit/errors.hpp"

namespace covpkit {

TransformResult apply_transformation(const CostTensor& c, const CostTensor& b, int s, const SearchBudget& budget) {
  if (c.dims() != b.dims()) throw InputError("C and B have different shapes");
  const int d = b.order();
  const int n = b.extent();
  if (s <= 0 || s >= d) throw InputError("need 0 < s < d");

  CovpVerdict check;
  if (n >= 2 && s == 1) {
    check = covp_check_axial_fast(b);
  } else if (n >= 2 && s == d - 1) {
    check = covp_check_planar_p2(b);
  } else {
    check = covp_check_bruteforce(b, s, budget);
    if (check.provisional && !check.witness) throw BudgetExhausted("could not enumerate all solutions to certify B");
    if (check.status == CovpStatus::vacuous) throw InputError("the problem has no feasible solution, so z is undefined");
  }

  TransformResult out;
  if (!check.holds()) {
    out.refusal = std::move(check.witness);
    return out;
  }
  out.admissible = true;
  out.reduced = c - b;
  out.z = *check.common_value;
  return out;
}

AxialReduction axial_reduction(const CostTensor& c) {
  const int d = c.order();
  if (d < 2) throw InputError("axial reduction needs d >= 2");
  AxialReduction out;
  out.vectors = zero_decomposition(c.dims(), 1);
  out.reduced = c;
  Rational z;
  bool changed = true;
  while (changed) {
    changed = false;
    ++out.passes;
    for (int k = 0; k < d; ++k) {
      const int extent = c.dims()[static_cast<std::size_t>(k)];
      std::vector<std::optional<Rational>> minima(static_cast<std::size_t>(extent));
      IndexTuple t(static_cast<std::size_t>(d), 1);
      for (std::size_t off = 0; off < c.size(); ++off, next_index(t, c.dims())) {
        auto& m = minima[static_cast<std::size_t>(t[static_cast<std::size_t>(k)] - 1)];
        if (!m || out.reduced[off] < *m) m = out.reduced[off];
      }
      for (int j = 0; j < extent; ++j) {
        const Rational& m = *minima[static_cast<std::size_t>(j)];
        if (m.is_zero()) continue;
        changed = true;
        out.vectors.components[static_cast<std::size_t>(k)].values[static_cast<std::size_t>(j)] += m;
        z += m;
      }
      std::fill(t.begin(), t.end(), 1);
      for (std::size_t off = 0; off < c.size(); ++off, next_index(t, c.dims())) {
        out.reduced[off] -= *minima[static_cast<std::size_t>(t[static_cast<std::size_t>(k)] - 1)];
      }
    }
  }
  out.transformation = {reconstruct(out.vectors), z};
  return out;
}

OptimalityVerdict certify_optimal(const CostTensor& reduced, const FeasibleSolution& f, const Rational& z) {
  if (!is_feasible_solution(f)) throw InputError("the solution is not feasible");
  if (reduced.order() != f.d() || reduced.extent() != f.n()) throw InputError("solution and tensor shapes differ");
  OptimalityVerdict out;
  out.reduced_objective = objective(reduced, f);
  for (std::size_t off = 0; off < reduced.size(); ++off) {
    if (reduced[off].sign() < 0) {
      out.violated = OptimalityCondition::nonnegativity;
      out.negative_entry = unflatten_index(off, reduced.dims());
      return out;
    }
  }
  if (!out.reduced_objective.is_zero()) {
    out.violated = OptimalityCondition::zero_objective;
    return out;
  }
  out.optimal = true;
  out.value = z;
  return out;
}

std::int64_t TransportInstance::total() const {
  if (supplies.empty()) return 0;
  return std::accumulate(supplies.front().begin(), supplies.front().end(), std::int64_t{0});
}

void validate_transport(const TransportInstance& inst) {
  const int d = inst.costs.order();
  if (d < 2) throw InputError("transportation instance needs d >= 2");
  if (static_cast<int>(inst.supplies.size()) != d) {
    throw InputError("expected " + std::to_string(d) + " supply vectors, got " + std::to_string(inst.supplies.size()));
  }
  std::int64_t total = -1;
  for (int k = 0; k < d; ++k) {
    const auto& b = inst.supplies[static_cast<std::size_t>(k)];
    if (static_cast<int>(b.size()) != inst.costs.dims()[static_cast<std::size_t>(k)]) {
      throw InputError("supply vector " + std::to_string(k + 1) + " has length " + std::to_string(b.size()) +
                       ", extent is " + std::to_string(inst.costs.dims()[static_cast<std::size_t>(k)]));
    }
    std::int64_t sum = 0;
    for (auto x : b) {
      if (x < 0) throw InputError("supplies must be nonnegative");
      sum += x;
    }
    if (total >= 0 && sum != total) {
      throw InputError("unbalanced supplies: axis " + std::to_string(k + 1) + " totals " + std::to_string(sum) +
                       ", axis 1 totals " + std::to_string(total));
    }
    total = sum;
  }
}

bool is_feasible_plan(const TransportInstance& inst, const TransportPlan& plan) {
  if (plan.dims != inst.costs.dims() || plan.flow.size() != inst.costs.size()) return false;
  const auto d = plan.dims.size();
  std::vector<std::vector<std::int64_t>> sums(d);
  for (std::size_t k = 0; k < d; ++k) sums[k].assign(static_cast<std::size_t>(plan.dims[k]), 0);
  IndexTuple t(d, 1);
  for (std::size_t off = 0; off < plan.flow.size(); ++off, next_index(t, plan.dims)) {
    if (plan.flow[off] < 0) return false;
    for (std::size_t k = 0; k < d; ++k) sums[k][static_cast<std::size_t>(t[k] - 1)] += plan.flow[off];
  }
  return sums == inst.supplies;
}

Rational plan_cost(const CostTensor& costs, const TransportPlan& plan) {
  if (plan.dims != costs.dims()) throw InputError("plan and cost shapes differ");
  Rational total;
  for (std::size_t off = 0; off < plan.flow.size(); ++off) {
    if (plan.flow[off] != 0) add_product(total, Rational(plan.flow[off]), costs[off]);
  }
  return total;
}

TransportPlan northwest_plan(const TransportInstance& inst) {
  validate_transport(inst);
  const auto d = inst.supplies.size();
  auto remaining = inst.supplies;
  TransportPlan plan{inst.costs.dims(), std::vector<std::int64_t>(inst.costs.size(), 0)};
  std::vector<std::size_t> at(d, 0);
  auto advance = [&](std::size_t k) {
    while (at[k] < remaining[k].size() && remaining[k][at[k]] == 0) ++at[k];
  };
  for (std::size_t k = 0; k < d; ++k) advance(k);
  std::int64_t left = inst.total();
  while (left > 0) {
    std::int64_t amount = left;
    IndexTuple t(d);
    for (std::size_t k = 0; k < d; ++k) {
      amount = std::min(amount, remaining[k][at[k]]);
      t[k] = static_cast<int>(at[k]) + 1;
    }
    plan.flow[flatten_index(t, plan.dims)] += amount;
    for (std::size_t k = 0; k < d; ++k) {
      remaining[k][at[k]] -= amount;
      advance(k);
    }
    left -= amount;
  }
  return plan;
}

namespace {

CostTensor restrict_costs(const CostTensor& c, const std::vector<std::vector<int>>& active) {
  Extents dims;
  for (const auto& a : active) dims.push_back(static_cast<int>(a.size()));
  CostTensor out(dims);
  IndexTuple t(dims.size(), 1);
  IndexTuple src(dims.size());
  for (std::size_t off = 0; off < out.size(); ++off, next_index(t, dims)) {
    for (std::size_t k = 0; k < dims.size(); ++k) src[k] = active[k][static_cast<std::size_t>(t[k] - 1)];
    out[off] = c.at(src);
  }
  return out;
}

}  // namespace

TransportVerdict covp_check_axial_tp(const TransportInstance& inst) {
  validate_transport(inst);
  if (inst.total() == 0) throw InputError("transportation instance has zero total supply");
  const auto d = inst.supplies.size();
  const CostTensor& c = inst.costs;
  TransportVerdict out;
  out.active.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < inst.supplies[k].size(); ++i) {
      if (inst.supplies[k][i] > 0) out.active[k].push_back(static_cast<int>(i) + 1);
    }
  }

  const CostTensor restricted = restrict_costs(c, out.active);
  if (restricted.size() == 1) {
    Decomposition trivial = zero_decomposition(restricted.dims(), 1);
    trivial.components.front().values[0] = restricted[0];
    out.decomposition = std::move(trivial);
  } else {
    DecomposeResult dec = decompose(restricted, 1);
    if (dec.decomposable()) {
      out.decomposition = std::move(dec.decomposition);
    } else {
      out.certificate = std::move(dec.certificate);
    }
  }
  out.sum_decomposable = out.decomposition.has_value();
  if (out.sum_decomposable) {
    Rational value;
    for (std::size_t k = 0; k < d; ++k) {
      const auto& comp = out.decomposition->components[k].values;
      for (std::size_t i = 0; i < out.active[k].size(); ++i) {
        add_product(value, Rational(inst.supplies[k][static_cast<std::size_t>(out.active[k][i] - 1)]), comp[i]);
      }
    }
    out.status = CovpStatus::holds;
    out.common_value = value;
    return out;
  }

  // Single-axis exchanges between two unit shipments x, y of some plan. On a
  // shared coordinate both units come from one facility, which needs supply >= 2.
  const Extents& rdims = restricted.dims();
  auto supply_at = [&](std::size_t k, int restricted_index) {
    return inst.supplies[k][static_cast<std::size_t>(out.active[k][static_cast<std::size_t>(restricted_index - 1)] - 1)];
  };
  for (std::size_t xo = 0; xo < restricted.size() && !out.witness; ++xo) {
    const IndexTuple x = unflatten_index(xo, rdims);
    for (std::size_t yo = xo + 1; yo < restricted.size() && !out.witness; ++yo) {
      const IndexTuple y = unflatten_index(yo, rdims);
      bool compatible = true;
      for (std::size_t k = 0; k < d && compatible; ++k) compatible = x[k] != y[k] || supply_at(k, x[k]) >= 2;
      if (!compatible) continue;
      for (std::size_t axis = 0; axis < d; ++axis) {
        if (x[axis] == y[axis]) continue;
        IndexTuple xs = x, ys = y;
        std::swap(xs[axis], ys[axis]);
        if (restricted[xo] + restricted[yo] == restricted.at(xs) + restricted.at(ys)) continue;

        TransportInstance rest = inst;
        auto lift = [&](const IndexTuple& t) {
          IndexTuple full(d);
          for (std::size_t k = 0; k < d; ++k) full[k] = out.active[k][static_cast<std::size_t>(t[k] - 1)];
          return full;
        };
        const IndexTuple fx = lift(x), fy = lift(y), fxs = lift(xs), fys = lift(ys);
        for (std::size_t k = 0; k < d; ++k) {
          rest.supplies[k][static_cast<std::size_t>(fx[k] - 1)] -= 1;
          rest.supplies[k][static_cast<std::size_t>(fy[k] - 1)] -= 1;
        }
        TransportPlan first = northwest_plan(rest);
        TransportPlan second = first;
        first.flow[flatten_index(fx, c.dims())] += 1;
        first.flow[flatten_index(fy, c.dims())] += 1;
        second.flow[flatten_index(fxs, c.dims())] += 1;
        second.flow[flatten_index(fys, c.dims())] += 1;
        Rational v1 = plan_cost(c, first), v2 = plan_cost(c, second);
        if (!is_feasible_plan(inst, first) || !is_feasible_plan(inst, second) || v1 == v2) {
          throw InternalError("transport exchange witness is invalid");
        }
        out.witness_values = std::make_pair(std::move(v1), std::move(v2));
        out.witness = std::make_pair(std::move(first), std::move(second));
        break;
      }
    }
  }
  if (out.witness) {
    out.status = CovpStatus::fails;
    return out;
  }
  out.status = CovpStatus::holds;
  out.common_value = plan_cost(c, northwest_plan(inst));
  return out;
}

CostTensor blow_up(const TransportInstance& inst) {
  validate_transport(inst);
  const std::int64_t total = inst.total();
  if (total <= 0) throw InputError("blow-up needs a positive total supply");
  if (total > 64) throw InputError("blow-up total " + std::to_string(total) + " is too large");
  const auto d = inst.supplies.size();
  std::vector<std::vector<int>> origin(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < inst.supplies[k].size(); ++i) {
      for (std::int64_t r = 0; r < inst.supplies[k][i]; ++r) origin[k].push_back(static_cast<int>(i) + 1);
    }
  }
  const int n = static_cast<int>(total);
  CostTensor out = CostTensor::cube(static_cast<int>(d), n);
  IndexTuple t(d, 1);
  IndexTuple src(d);
  for (std::size_t off = 0; off < out.size(); ++off, next_index(t, out.dims())) {
    for (std::size_t k = 0; k < d; ++k) src[k] = origin[k][static_cast<std::size_t>(t[k] - 1)];
    out[off] = inst.costs.at(src);
  }
  return out;
}

}  // namespace covpkit
