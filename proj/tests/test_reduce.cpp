#include <doctest.h>

#include <random>

#include "covpkit/errors.hpp"
#include "covpkit/reduce.hpp"
#include "helpers.hpp"

using namespace covpkit;
using testing_util::tensor;

namespace {

TransportInstance instance(std::vector<int> dims, std::vector<long long> costs, std::vector<std::vector<std::int64_t>> sup) {
  return {tensor(std::move(dims), std::move(costs)), std::move(sup)};
}

/// Random balanced supplies with the given total, every entry >= min_entry.
std::vector<std::vector<std::int64_t>> random_supplies(std::mt19937_64& rng, const std::vector<int>& dims,
                                                       std::int64_t total, std::int64_t min_entry = 0) {
  std::vector<std::vector<std::int64_t>> out;
  for (int n : dims) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(n), min_entry);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (std::int64_t left = total - min_entry * n; left > 0; --left) ++v[static_cast<std::size_t>(pick(rng))];
    out.push_back(std::move(v));
  }
  return out;
}

oracle::Q plan_cost_oracle(const CostTensor& c, const std::vector<std::int64_t>& flow) {
  oracle::Q total = 0;
  for (std::size_t i = 0; i < flow.size(); ++i) total += oracle::q(c[i]) * static_cast<long>(flow[i]);
  return total;
}

}  // namespace

TEST_CASE("apply_transformation examples") {
  const auto c = tensor({2, 2}, {1, 2, 3, 4});
  const auto id = apply_transformation(c, CostTensor::cube(2, 2), 1);
  CHECK(id.admissible);
  CHECK(id.reduced == c);
  CHECK(id.z == Rational(0));

  const auto sum = apply_transformation(c, tensor({2, 2}, {1, 2, 3, 4}), 1);
  CHECK(sum.admissible);
  CHECK(sum.reduced.is_zero());
  CHECK(sum.z == Rational(5));

  const auto ex = apply_transformation(counterexample_array(), counterexample_array(), 2);
  CHECK(ex.admissible);
  CHECK(ex.reduced.is_zero());
  CHECK(ex.z == Rational(1));

  const auto refused = apply_transformation(c, tensor({2, 2}, {1, 0, 0, 0}), 1);
  CHECK(!refused.admissible);
  REQUIRE(refused.refusal.has_value());
  CHECK(refused.refusal->first_value != refused.refusal->second_value);

  CHECK_THROWS_AS((void)apply_transformation(c, CostTensor::cube(2, 3), 1), InputError);
  CHECK_THROWS_AS((void)apply_transformation(CostTensor::cube(5, 3), CostTensor::cube(5, 3), 2), InputError);
}

TEST_CASE("objective shift law over every feasible solution") {
  std::mt19937_64 rng(89);
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= 3; ++n)
      for (int s : {1, d - 1}) {
        const auto sols = oracle::solutions(d, s, n);
        for (int trial = 0; trial < 5; ++trial) {
          const std::vector<int> dims(d, n);
          const auto c = testing_util::random_tensor(rng, dims);
          const auto b = reconstruct(testing_util::random_decomposition(rng, dims, s));
          const auto r = apply_transformation(c, b, s);
          REQUIRE(r.admissible);
          for (const auto& f : sols)
            CHECK(oracle::objective(c, f) - oracle::objective(r.reduced, f) == r.z.to_mpq());
        }
      }
}

TEST_CASE("axial reduction examples") {
  const auto r = axial_reduction(tensor({2, 2}, {1, 2, 3, 4}));
  CHECK(r.transformation.index_z == Rational(5));
  CHECK(r.reduced.is_zero());
  CHECK(reconstruct(r.vectors) == r.transformation.subtrahend);

  const auto z = axial_reduction(CostTensor::cube(3, 3));
  CHECK(z.transformation.index_z == Rational(0));
  CHECK(z.passes == 1);
}

TEST_CASE("axial reduction is a valid admissible transformation and lower bound") {
  std::mt19937_64 rng(97);
  for (int d = 2; d <= 3; ++d)
    for (int n = 2; n <= 4; ++n) {
      const auto sols = oracle::solutions(d, 1, n);
      for (int trial = 0; trial < 8; ++trial) {
        const std::vector<int> dims(d, n);
        auto c = testing_util::random_tensor(rng, dims);
        for (auto& x : c.data()) x = x.abs();
        const auto r = axial_reduction(c);
        const auto& b = r.transformation.subtrahend;
        oracle::Q best = oracle::objective(c, sols.front());
        for (const auto& f : sols) {
          best = std::min(best, oracle::objective(c, f));
          CHECK(oracle::objective(b, f) == r.transformation.index_z.to_mpq());
          CHECK(oracle::objective(r.reduced, f) == oracle::objective(c, f) - r.transformation.index_z.to_mpq());
        }
        CHECK(r.transformation.index_z.to_mpq() <= best);
        for (const auto& x : r.reduced.data()) CHECK(x.sign() >= 0);
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] - b[i] == r.reduced[i]);
      }
    }
}

TEST_CASE("certify_optimal") {
  const FeasibleSolution diag(2, 1, 2, {{1, 1}, {2, 2}});
  const auto ok = certify_optimal(CostTensor::cube(2, 2), diag, Rational(5));
  CHECK(ok.optimal);
  CHECK(ok.value == Rational(5));

  const auto neg = certify_optimal(tensor({2, 2}, {0, -1, 0, 0}), diag, Rational(5));
  CHECK(!neg.optimal);
  CHECK(neg.violated == OptimalityCondition::nonnegativity);
  CHECK(neg.negative_entry == IndexTuple{1, 2});

  const auto pos = certify_optimal(tensor({2, 2}, {1, 0, 0, 1}), diag, Rational(5));
  CHECK(!pos.optimal);
  CHECK(pos.violated == OptimalityCondition::zero_objective);
  CHECK(pos.reduced_objective == Rational(2));

  CHECK_THROWS_AS((void)certify_optimal(CostTensor::cube(2, 2), FeasibleSolution(2, 1, 2, {{1, 1}, {2, 1}}), Rational(0)),
                  InputError);
}

TEST_CASE("transportation COVP examples") {
  CHECK(covp_check_axial_tp(instance({2, 2}, {0, 2, 1, 3}, {{2, 1}, {1, 2}})).holds());

  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = TransportInstance{tensor({2, 2}, {0, 0, 0, 1}), random_supplies(rng, {2, 2}, 2 + trial % 3, 1)};
    const auto v = covp_check_axial_tp(inst);
    CHECK(!v.holds());
    REQUIRE(v.witness.has_value());
    CHECK(is_feasible_plan(inst, v.witness->first));
    CHECK(is_feasible_plan(inst, v.witness->second));
    CHECK(plan_cost(inst.costs, v.witness->first) != plan_cost(inst.costs, v.witness->second));
  }

  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<int> dims{2, 3, 2};
    const auto inst = TransportInstance{reconstruct(testing_util::random_decomposition(rng, dims, 1)),
                                        random_supplies(rng, dims, 1 + trial % 4)};
    const auto v = covp_check_axial_tp(inst);
    CHECK(v.holds());
    CHECK(v.sum_decomposable);
  }

  CHECK_THROWS_AS((void)covp_check_axial_tp(instance({2, 2}, {0, 0, 0, 0}, {{1, 1}, {1, 2}})), InputError);
  CHECK_THROWS_AS((void)covp_check_axial_tp(instance({2, 2}, {0, 0, 0, 0}, {{2, -1}, {1, 0}})), InputError);
  CHECK_THROWS_AS((void)covp_check_axial_tp(instance({2, 2}, {0, 0, 0, 0}, {{1, 1}})), InputError);
}

TEST_CASE("transportation COVP agrees with enumerated integral plans") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 150; ++trial) {
    const int d = 2 + trial % 2;
    std::vector<int> dims;
    std::uniform_int_distribution<int> ext(1, 3);
    for (int k = 0; k < d; ++k) dims.push_back(ext(rng));
    const std::int64_t total = 1 + trial % 4;
    auto costs = trial % 3 == 0 ? reconstruct(testing_util::random_decomposition(rng, dims, 1))
                                : testing_util::random_tensor(rng, dims, 2, 1);
    const TransportInstance inst{costs, random_supplies(rng, dims, total)};
    const auto plans = oracle::transport_plans(dims, inst.supplies);
    bool holds = true;
    for (const auto& p : plans) holds = holds && plan_cost_oracle(costs, p) == plan_cost_oracle(costs, plans.front());
    const auto v = covp_check_axial_tp(inst);
    CHECK(v.holds() == holds);
    if (holds) CHECK(v.common_value->to_mpq() == plan_cost_oracle(costs, plans.front()));
    if (v.sum_decomposable) CHECK(holds);
  }
}

TEST_CASE("northwest plan is feasible") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<int> dims{3, 2, 4};
    const TransportInstance inst{CostTensor(dims), random_supplies(rng, dims, 6)};
    CHECK(is_feasible_plan(inst, northwest_plan(inst)));
  }
}

TEST_CASE("blow-up examples") {
  CHECK(blow_up(instance({1, 1}, {1}, {{2}, {2}})) == tensor({2, 2}, {1, 1, 1, 1}));

  const auto big = blow_up(instance({2, 2}, {0, 2, 1, 3}, {{2, 1}, {2, 1}}));
  CHECK(big.dims() == Extents{3, 3});
  CHECK(big == tensor({3, 3}, {0, 0, 2, 0, 0, 2, 1, 1, 3}));
  CHECK(decompose(big, 1).decomposable());

  const auto same = instance({2, 3}, {1, 2, 3, 4, 5, 6}, {{1, 2}, {1, 1, 1}});
  const auto unit = instance({3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9}, {{1, 1, 1}, {1, 1, 1}});
  CHECK(blow_up(unit) == unit.costs);
  CHECK(blow_up(same).dims() == Extents{3, 3});

  CHECK_THROWS_AS((void)blow_up(instance({1, 1}, {1}, {{0}, {0}})), InputError);
}

TEST_CASE("blow-up preserves sum-decomposability both ways") {
  std::mt19937_64 rng(109);
  int decomposable = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + trial % 2;
    const std::vector<int> dims(d, 2);
    auto costs = trial % 2 == 0 ? reconstruct(testing_util::random_decomposition(rng, dims, 1))
                                : testing_util::random_tensor(rng, dims, 2, 1);
    const TransportInstance inst{costs, random_supplies(rng, dims, 2 + trial % 4, 1)};
    const bool before = decompose(costs, 1).decomposable();
    decomposable += before;
    CHECK(before == decompose(blow_up(inst), 1).decomposable());
  }
  CHECK(decomposable >= 30);
}
