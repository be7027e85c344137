#include <doctest.h>

#include <random>

#include "covpkit/errors.hpp"
#include "covpkit/matrix.hpp"
#include "covpkit/tensor.hpp"
#include "oracles.hpp"

using namespace covpkit;

namespace {

ExactMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int zero_bias = 0) {
  ExactMatrix m(r, c);
  std::uniform_int_distribution<int> coin(0, zero_bias);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (coin(rng) == 0) m(i, j) = oracle::random_rational(rng, 5, 3);
  return m;
}

std::vector<std::vector<oracle::Q>> dense(const ExactMatrix& m) {
  std::vector<std::vector<oracle::Q>> out(m.rows(), std::vector<oracle::Q>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).to_mpq();
  return out;
}

}  // namespace

TEST_CASE("rational arithmetic matches mpq and stays reduced") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Rational a = oracle::random_rational(rng, 1000, 97);
    const Rational b = oracle::random_rational(rng, 1000, 97);
    const mpq_class qa = a.to_mpq(), qb = b.to_mpq();
    CHECK((a + b).to_mpq() == qa + qb);
    CHECK((a - b).to_mpq() == qa - qb);
    CHECK((a * b).to_mpq() == qa * qb);
    if (!b.is_zero()) CHECK((a / b).to_mpq() == qa / qb);
    CHECK(((a < b) == (qa < qb)));
    const mpq_class back(a.str());
    CHECK(back == qa);
    CHECK(mpz_class(gcd(back.get_num(), back.get_den())) == 1);
  }
}

TEST_CASE("rational arithmetic crosses into big integers exactly") {
  Rational big(1);
  mpq_class ref(1);
  for (int i = 0; i < 80; ++i) {
    big *= Rational(3000000007LL, 7);
    ref *= mpq_class(mpz_class(3000000007L), mpz_class(7));
  }
  CHECK(big.to_mpq() == ref);
  for (int i = 0; i < 80; ++i) big /= Rational(3000000007LL, 7);
  CHECK(big == Rational(1));
  CHECK(big.str() == "1");
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("7/3") == Rational(7, 3));
  CHECK(Rational::parse("-4/6") == Rational(-2, 3));
  CHECK(Rational::parse("12") == Rational(12));
  CHECK(Rational::parse("123456789012345678901234567890").str() == "123456789012345678901234567890");
  for (const char* bad : {"0.5", "1e3", "1/0", " 1", "", "1/", "/2", "nan", "1/-2"})
    CHECK_THROWS_AS((void)Rational::parse(bad), InputError);
}

TEST_CASE("flatten_index examples and round trip") {
  const std::vector<int> d22{2, 2}, d333{3, 3, 3};
  CHECK(flatten_index(std::vector<int>{1, 1}, d22) == 0);
  CHECK(flatten_index(std::vector<int>{2, 1}, d22) == 2);
  CHECK(flatten_index(std::vector<int>{1, 2, 3}, d333) == 5);
  CHECK_THROWS_AS((void)flatten_index(std::vector<int>{1, 4, 1}, d333), InputError);
  CHECK_THROWS_AS((void)flatten_index(std::vector<int>{1, 1}, d333), InputError);

  for (const std::vector<int>& dims : {std::vector<int>{10, 10, 10, 10}, std::vector<int>{3, 7, 2, 5}, std::vector<int>{9999}}) {
    const std::size_t total = element_count(dims);
    IndexTuple t(dims.size(), 1);
    for (std::size_t k = 0; k < total; ++k) {
      CHECK_EQ(flatten_index(t, dims), k);
      CHECK(unflatten_index(k, dims) == t);
      CHECK(oracle::offset(t, dims) == k);
      next_index(t, dims);
    }
  }
}

TEST_CASE("rank examples") {
  CHECK(rank(ExactMatrix::identity(3)) == 3);
  CHECK(rank(ExactMatrix(4, 4)) == 0);
  CHECK(rank_bareiss(ExactMatrix(4, 4)) == 0);
}

TEST_CASE("rank agrees with dense elimination on random matrices") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> size(1, 7);
    const auto r = static_cast<std::size_t>(size(rng));
    const auto c = static_cast<std::size_t>(size(rng));
    ExactMatrix m = random_matrix(rng, r, c, trial % 3);
    // Force dependencies now and then.
    if (r >= 3 && trial % 2 == 0)
      for (std::size_t j = 0; j < c; ++j) m(2, j) = m(0, j) * Rational(2, 3) - m(1, j);
    const std::size_t expected = oracle::rank(dense(m));
    CHECK(rank(m) == expected);
    CHECK(rank_bareiss(m) == expected);
  }
}

TEST_CASE("determinant examples and product law") {
  CHECK(determinant(ExactMatrix::identity(2)) == Rational(1));
  CHECK(determinant(ExactMatrix::from_rows({{0, 1}, {1, 0}})) == Rational(-1));
  CHECK_THROWS_AS((void)determinant(ExactMatrix(2, 3)), InputError);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const ExactMatrix a = random_matrix(rng, n, n, trial % 2);
    const ExactMatrix b = random_matrix(rng, n, n);
    CHECK(determinant(a).to_mpq() == oracle::determinant(dense(a)));
    CHECK(determinant(a * b) == determinant(a) * determinant(b));
  }
}

TEST_CASE("solve_linear examples") {
  {
    const std::vector<Rational> b{3, 5};
    const auto s = solve_linear(ExactMatrix::identity(2), b);
    REQUIRE(s.consistent);
    CHECK(s.particular == b);
    CHECK(s.kernel.empty());
  }
  {
    const std::vector<Rational> b{2};
    const auto s = solve_linear(ExactMatrix::from_rows({{1, 1}}), b);
    REQUIRE(s.consistent);
    CHECK(s.particular == std::vector<Rational>{2, 0});
    REQUIRE(s.kernel.size() == 1);
    CHECK(s.kernel[0][0] == -s.kernel[0][1]);
    CHECK(!s.kernel[0][0].is_zero());
  }
  {
    const std::vector<Rational> b{0, 1};
    const auto s = solve_linear(ExactMatrix::from_rows({{1}, {1}}), b);
    CHECK(!s.consistent);
    REQUIRE(s.certificate.size() == 2);
    CHECK(s.certificate[0] + s.certificate[1] == Rational(0));
    CHECK(!s.certificate[1].is_zero());
  }
  CHECK_THROWS_AS((void)solve_linear(ExactMatrix(2, 2), std::vector<Rational>{1}), InputError);
}

TEST_CASE("solve_linear solutions, kernels and certificates verify") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + trial % 6, c = 1 + (trial / 6) % 6;
    ExactMatrix a = random_matrix(rng, r, c, 2);
    std::vector<Rational> b(r);
    if (trial % 2 == 0) {
      std::vector<Rational> x(c);
      for (auto& v : x) v = oracle::random_rational(rng);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) b[i] += a(i, j) * x[j];
    } else {
      for (auto& v : b) v = oracle::random_rational(rng);
    }
    const auto s = solve_linear(a, b);
    auto rows = dense(a);
    const std::size_t ra = oracle::rank(rows);
    for (std::size_t i = 0; i < r; ++i) rows[i].push_back(b[i].to_mpq());
    const bool consistent = oracle::rank(rows) == ra;
    REQUIRE(s.consistent == consistent);
    if (s.consistent) {
      for (std::size_t i = 0; i < r; ++i) {
        Rational lhs;
        for (std::size_t j = 0; j < c; ++j) lhs += a(i, j) * s.particular[j];
        CHECK(lhs == b[i]);
      }
      CHECK(s.kernel.size() == c - ra);
      for (const auto& k : s.kernel)
        for (std::size_t i = 0; i < r; ++i) {
          Rational lhs;
          for (std::size_t j = 0; j < c; ++j) lhs += a(i, j) * k[j];
          CHECK(lhs.is_zero());
        }
    } else {
      Rational yb;
      for (std::size_t i = 0; i < r; ++i) yb += s.certificate[i] * b[i];
      CHECK(!yb.is_zero());
      for (std::size_t j = 0; j < c; ++j) {
        Rational ya;
        for (std::size_t i = 0; i < r; ++i) ya += s.certificate[i] * a(i, j);
        CHECK(ya.is_zero());
      }
    }
  }
}

TEST_CASE("tensor basics") {
  CostTensor c = CostTensor::cube(3, 2);
  CHECK(c.size() == 8);
  CHECK(c.is_zero());
  CHECK(c.extent() == 2);
  CostTensor u({2, 3});
  CHECK(!u.is_cubic());
  CHECK_THROWS_AS((void)u.extent(), InputError);
  CHECK_THROWS_AS(CostTensor({2, 2}, std::vector<Rational>{1, 2, 3}), InputError);
}
