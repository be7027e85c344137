#include <doctest.h>

#include <random>

#include "covpkit/covp.hpp"
#include "covpkit/errors.hpp"
#include "covpkit/savs.hpp"
#include "helpers.hpp"

using namespace covpkit;
using testing_util::tensor;

namespace {

std::size_t ipow(int n, int e) { return oracle::power(n, e); }

}  // namespace

TEST_CASE("project examples") {
  CHECK(project(std::vector<int>{3, 1, 2}, {1, 3}) == IndexTuple{3, 2});
  CHECK(project(std::vector<int>{5, 5, 5, 5}, {2}) == IndexTuple{5});
  CHECK(project(std::vector<int>{1, 2, 3, 4}, {2, 3, 4}) == IndexTuple{2, 3, 4});
  CHECK_THROWS_AS(validate_subset({2, 1}, 3), InputError);
  CHECK_THROWS_AS(validate_subset({1, 2, 3}, 3), InputError);
  CHECK(index_subsets(4, 2).size() == 6);
}

TEST_CASE("reconstruct examples") {
  auto D = zero_decomposition({2, 2}, 1);
  D.components[0].values = tensor({2}, {0, 1});
  D.components[1].values = tensor({2}, {0, 2});
  CHECK(reconstruct(D) == tensor({2, 2}, {0, 2, 1, 3}));

  CHECK(reconstruct(zero_decomposition({3, 3, 3}, 2)).is_zero());

  auto E = zero_decomposition({2, 2, 2}, 2);
  REQUIRE(E.components[2].q == IndexSubset{2, 3});
  E.components[2].values = tensor({2, 2}, {1, 0, 0, 0});
  CHECK(reconstruct(E) == tensor({2, 2, 2}, {1, 0, 0, 0, 1, 0, 0, 0}));
}

TEST_CASE("decompose examples") {
  const auto c = tensor({2, 2}, {0, 2, 1, 3});
  const auto r = decompose(c, 1);
  REQUIRE(r.decomposable());
  CHECK(reconstruct(*r.decomposition) == c);

  const auto ex = counterexample_array();
  const auto bad = decompose(ex, 2);
  CHECK(!bad.decomposable());
  CHECK(bad.certificate.size() == ex.size());
  CHECK(verify_certificate(ex, 2, bad.certificate));
  CHECK(!oracle::decomposable(ex, 2));

  CHECK_THROWS_AS((void)decompose(c, 0), InputError);
  CHECK_THROWS_AS((void)decompose(c, 2), InputError);
  CHECK_THROWS_AS((void)decompose(CostTensor::cube(3, 1), 1), InputError);
}

TEST_CASE("decompose round trips random decompositions") {
  std::mt19937_64 rng(31);
  for (int d = 2; d <= 5; ++d)
    for (int n = 2; n <= 4; ++n)
      for (int s = 1; s < d; ++s) {
        if (ipow(n, d) > 256 && s > 2) continue;  // covered by the smaller shapes below
        const std::vector<int> dims(d, n);
        const auto D = testing_util::random_decomposition(rng, dims, s);
        const CostTensor c = reconstruct(D);
        CHECK(oracle::values(c) == testing_util::reconstruct_oracle(D));
        const auto r = decompose(c, s);
        REQUIRE(r.decomposable());
        CHECK(reconstruct(*r.decomposition) == c);
      }
  {
    const std::vector<int> dims(5, 4);
    const auto D = testing_util::random_decomposition(rng, dims, 4);
    const auto r = decompose(reconstruct(D), 4);
    REQUIRE(r.decomposable());
    CHECK(reconstruct(*r.decomposition) == reconstruct(D));
  }
}

TEST_CASE("decompose agrees with the rank oracle and certificates verify") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + trial % 3, n = 2 + (trial / 3) % 2;
    const int s = 1 + trial % (d - 1);
    const std::vector<int> dims(d, n);
    CostTensor c = reconstruct(testing_util::random_decomposition(rng, dims, s));
    if (trial % 2 == 0) c.data()[static_cast<std::size_t>(trial) % c.size()] += Rational(1, 3);
    const auto r = decompose(c, s);
    CHECK(r.decomposable() == oracle::decomposable(c, s));
    if (!r.decomposable()) CHECK(verify_certificate(c, s, r.certificate));
  }
}

TEST_CASE("decompose accepts unequal extents") {
  std::mt19937_64 rng(41);
  const std::vector<int> dims{2, 3, 4};
  const auto D = testing_util::random_decomposition(rng, dims, 1);
  const auto c = reconstruct(D);
  const auto r = decompose(c, 1);
  REQUIRE(r.decomposable());
  CHECK(reconstruct(*r.decomposition) == c);
}

TEST_CASE("axial constructive decomposition") {
  const auto r = decompose_axial_constructive(tensor({2, 2}, {0, 2, 1, 3}));
  REQUIRE(r.reconstructs());
  CHECK(r.decomposition.components[0].values == tensor({2}, {0, 1}));
  CHECK(r.decomposition.components[1].values == tensor({2}, {0, 2}));

  const auto z = decompose_axial_constructive(CostTensor::cube(3, 3));
  REQUIRE(z.reconstructs());
  for (const auto& comp : z.decomposition.components) CHECK(comp.values.is_zero());

  const auto bad = decompose_axial_constructive(tensor({2, 2}, {0, 0, 0, 1}));
  CHECK(!bad.reconstructs());
  CHECK(!oracle::decomposable(tensor({2, 2}, {0, 0, 0, 1}), 1));
}

TEST_CASE("planar constructive decomposition") {
  const auto r = decompose_planar_constructive(tensor({2, 2}, {0, 2, 1, 3}));
  REQUIRE(r.reconstructs());
  CHECK(reconstruct(r.decomposition) == tensor({2, 2}, {0, 2, 1, 3}));

  const auto z = decompose_planar_constructive(CostTensor::cube(3, 2));
  REQUIRE(z.reconstructs());
  for (const auto& comp : z.decomposition.components) CHECK(comp.values.is_zero());

  CHECK(!decompose_planar_constructive(counterexample_array()).reconstructs());

  std::mt19937_64 rng(43);
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= 3; ++n) {
      const auto D = testing_util::random_decomposition(rng, std::vector<int>(d, n), d - 1);
      const auto c = reconstruct(D);
      const auto p = decompose_planar_constructive(c);
      REQUIRE(p.reconstructs());
      CHECK(reconstruct(p.decomposition) == c);
    }
}

TEST_CASE("axial constructive succeeds exactly when decompose does, on COVP arrays") {
  // COVP arrays for s = 1: sums of vectors plus random perturbations that keep the COVP
  // only when they happen to be decomposable; compared on both outcomes.
  std::mt19937_64 rng(47);
  for (int d = 2; d <= 4; ++d)
    for (int n = 2; n <= 3; ++n)
      for (int trial = 0; trial < 4; ++trial) {
        const std::vector<int> dims(d, n);
        CostTensor c = reconstruct(testing_util::random_decomposition(rng, dims, 1));
        if (trial % 2 == 1) c.data()[c.size() - 1] += Rational(1);
        const auto sols = oracle::solutions(d, 1, n);
        const bool covp = oracle::covp(c, sols).holds;
        if (!covp) continue;
        CHECK(decompose_axial_constructive(c).reconstructs() == decompose(c, 1).decomposable());
      }
}

TEST_CASE("savs_dimension examples and closed forms") {
  CHECK(savs_dimension(4, 2, 3) == 33);
  CHECK(savs_dimension(3, 1, 3) == 7);
  CHECK(savs_dimension(3, 2, 3) == 19);
  for (int d = 2; d <= 6; ++d)
    for (int n = 2; n <= 5; ++n) {
      CHECK(savs_dimension(d, 1, n) == static_cast<std::uint64_t>(d * n - d + 1));
      CHECK(savs_dimension(d, d - 1, n) == ipow(n, d) - ipow(n - 1, d));
    }
  CHECK_THROWS_AS((void)savs_dimension(3, 0, 2), InputError);
  CHECK_THROWS_AS((void)savs_dimension(3, 3, 2), InputError);
  CHECK_THROWS_AS((void)savs_dimension(3, 1, 1), InputError);
}

TEST_CASE("savs generator matrix rank matches the dimension and the oracle") {
  const auto g = savs_generator_matrix(2, 1, 2);
  CHECK(g.rows() == 4);
  CHECK(g.cols() == 4);
  CHECK(rank(g) == 3);
  CHECK(rank(savs_generator_matrix(3, 2, 2)) == 7);
  for (int d = 2; d <= 5; ++d)
    for (int s = 1; s < d; ++s)
      for (int n = 2; n <= 4; ++n) {
        if (ipow(n, d) > 256) continue;  // large shapes run in the acceptance suite
        CHECK(rank(savs_generator_matrix(d, s, n)) == savs_dimension(d, s, n));
        if (ipow(n, d) <= 81) CHECK(oracle::savs_dimension(d, s, n) == savs_dimension(d, s, n));
      }
}
