#pragma once

#include <random>
#include <vector>

#include "covpkit/savs.hpp"
#include "oracles.hpp"

namespace testing_util {

using covpkit::CostTensor;
using covpkit::Rational;

inline CostTensor tensor(std::vector<int> dims, std::vector<long long> data) {
  std::vector<Rational> values(data.begin(), data.end());
  return CostTensor(std::move(dims), std::move(values));
}

inline CostTensor random_tensor(std::mt19937_64& rng, const std::vector<int>& dims, int span = 6, int max_den = 4) {
  CostTensor c(dims);
  for (auto& x : c.data()) x = oracle::random_rational(rng, span, max_den);
  return c;
}

/// Random decomposition with the library's component layout, filled by the test.
inline covpkit::Decomposition random_decomposition(std::mt19937_64& rng, const std::vector<int>& dims, int s) {
  auto D = covpkit::zero_decomposition(dims, s);
  for (auto& comp : D.components)
    for (auto& x : comp.values.data()) x = oracle::random_rational(rng);
  return D;
}

/// Independent reconstruction: sum of A^Q over each tuple's projections.
inline std::vector<oracle::Q> reconstruct_oracle(const covpkit::Decomposition& D) {
  const auto tuples = oracle::all_tuples(D.dims);
  std::vector<oracle::Q> out(tuples.size(), 0);
  for (std::size_t i = 0; i < tuples.size(); ++i)
    for (const auto& comp : D.components) {
      oracle::Tuple p;
      for (int k : comp.q) p.push_back(tuples[i][k - 1]);
      out[i] += oracle::q(comp.values[oracle::offset(p, comp.values.dims())]);
    }
  return out;
}

inline std::vector<oracle::Solution> as_oracle(const std::vector<covpkit::FeasibleSolution>& sols) {
  std::vector<oracle::Solution> out;
  for (const auto& f : sols) out.push_back(f.tuples());
  return out;
}

}  // namespace testing_util
