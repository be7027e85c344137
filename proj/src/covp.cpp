#include "covpkit/covp.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <thread>

#include "covpkit/errors.hpp"

namespace covpkit {

const char* to_string(CovpStatus s) noexcept {
  switch (s) {
    case CovpStatus::holds:
      return "holds";
    case CovpStatus::fails:
      return "fails";
    case CovpStatus::vacuous:
      return "vacuous";
  }
  return "unknown";
}

namespace {

struct Cube {
  int d;
  int n;
};

Cube require_cube(const CostTensor& c, int min_n) {
  if (c.order() < 2) throw InputError("need a tensor with d >= 2");
  int n = c.extent();
  if (n < min_n) throw InputError("need n >= " + std::to_string(min_n));
  return {c.order(), n};
}

std::vector<Rational> evaluate_batch(const CostTensor& c, const std::vector<FeasibleSolution>& batch,
                                     unsigned workers) {
  std::vector<Rational> values(batch.size());
  const std::size_t threads = std::min<std::size_t>(std::max(workers, 1U), batch.size() / 64 + 1);
  if (threads <= 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) values[i] = objective(c, batch[i]);
    return values;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < batch.size(); i += threads) values[i] = objective(c, batch[i]);
    });
  }
  for (auto& t : pool) t.join();
  return values;
}

}  // namespace

CovpVerdict covp_check_bruteforce(const CostTensor& c, int s, const SearchBudget& budget, unsigned workers) {
  const auto [d, n] = require_cube(c, 1);
  constexpr std::size_t kBatch = 4096;

  CovpVerdict verdict;
  std::optional<FeasibleSolution> reference;
  std::optional<Rational> reference_value;
  std::vector<FeasibleSolution> batch;

  // Returns true once a differing pair is found.
  auto flush = [&]() {
    auto values = evaluate_batch(c, batch, workers);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ++verdict.solutions_checked;
      if (!reference) {
        reference = batch[i];
        reference_value = values[i];
      } else if (values[i] != *reference_value) {
        verdict.witness = SolutionWitness{*reference, batch[i], *reference_value, values[i]};
        return true;
      }
    }
    batch.clear();
    return false;
  };

  StreamStatus st = stream_general(d, s, n, budget, [&](const FeasibleSolution& f) {
    batch.push_back(f);
    return batch.size() < kBatch || !flush();
  });
  if (!verdict.witness && !batch.empty()) flush();

  if (verdict.witness) {
    verdict.status = CovpStatus::fails;
    return verdict;
  }
  verdict.provisional = !st.complete;
  if (!reference) {
    verdict.status = CovpStatus::vacuous;
    return verdict;
  }
  verdict.status = CovpStatus::holds;
  verdict.common_value = reference_value;
  return verdict;
}

namespace {

// Latin square of order n >= 4 whose upper-left 2x2 corner is [[1,2],[2,1]].
LatinSquare corner_latin_square(int n) {
  LatinSquare sq{n, std::vector<int>(static_cast<std::size_t>(n * n), 0)};
  auto cell = [&](int r, int col) -> int& { return sq.grid[static_cast<std::size_t>(r * n + col)]; };
  for (int col = 0; col < n; ++col) cell(0, col) = col + 1;
  cell(1, 0) = 2;
  cell(1, 1) = 1;
  for (int col = 2; col < n; ++col) cell(1, col) = col + 1 < n ? col + 2 : 3;

  // Remaining rows: a perfect matching of columns to symbols not yet in the column.
  std::vector<std::vector<bool>> in_column(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n) + 1));
  for (int r = 0; r < 2; ++r) {
    for (int col = 0; col < n; ++col) in_column[static_cast<std::size_t>(col)][static_cast<std::size_t>(cell(r, col))] = true;
  }
  for (int r = 2; r < n; ++r) {
    std::vector<int> owner(static_cast<std::size_t>(n) + 1, -1);  // symbol -> column
    std::function<bool(int, std::vector<bool>&)> augment = [&](int col, std::vector<bool>& seen) {
      for (int sym = 1; sym <= n; ++sym) {
        if (in_column[static_cast<std::size_t>(col)][static_cast<std::size_t>(sym)] || seen[static_cast<std::size_t>(sym)]) continue;
        seen[static_cast<std::size_t>(sym)] = true;
        int other = owner[static_cast<std::size_t>(sym)];
        if (other < 0 || augment(other, seen)) {
          owner[static_cast<std::size_t>(sym)] = col;
          return true;
        }
      }
      return false;
    };
    for (int col = 0; col < n; ++col) {
      std::vector<bool> seen(static_cast<std::size_t>(n) + 1);
      if (!augment(col, seen)) throw InternalError("Latin rectangle completion failed");
    }
    for (int sym = 1; sym <= n; ++sym) {
      int col = owner[static_cast<std::size_t>(sym)];
      cell(r, col) = sym;
      in_column[static_cast<std::size_t>(col)][static_cast<std::size_t>(sym)] = true;
    }
  }
  if (!sq.valid()) throw InternalError("corner Latin square is not Latin");
  return sq;
}

// Two planar solutions that coincide outside {1,i_1} x ... x {1,i_d} and
// hold the two size-2 solutions of that box. Requires n >= 4.
std::pair<FeasibleSolution, FeasibleSolution> planar_lift(int d, int n, std::span<const int> corner) {
  const LatinSquare sq = corner_latin_square(n);
  const int m = d - 1;
  std::function<int(std::span<const int>)> h = [&](std::span<const int> x) {
    if (x.size() == 1) return x[0];
    return sq.at(x[0], h(x.subspan(1)));
  };
  auto relabel = [&](IndexTuple t) {
    for (int j = 0; j < d; ++j) {
      int target = corner[static_cast<std::size_t>(j)];
      int& v = t[static_cast<std::size_t>(j)];
      if (v == 2) {
        v = target;
      } else if (v == target) {
        v = 2;
      }
    }
    return t;
  };
  std::vector<IndexTuple> first, second;
  const Extents cell_dims(static_cast<std::size_t>(m), n);
  IndexTuple x(static_cast<std::size_t>(m), 1);
  do {
    IndexTuple t = x;
    t.push_back(h(x));
    first.push_back(relabel(t));
    bool in_corner = std::all_of(x.begin(), x.end(), [](int v) { return v <= 2; });
    if (in_corner) t.back() = 3 - t.back();
    second.push_back(relabel(t));
  } while (next_index(x, cell_dims));
  return {FeasibleSolution(d, d - 1, n, std::move(first)), FeasibleSolution(d, d - 1, n, std::move(second))};
}

SolutionWitness make_witness(const CostTensor& c, FeasibleSolution a, FeasibleSolution b) {
  Rational va = objective(c, a);
  Rational vb = objective(c, b);
  if (!is_feasible_solution(a) || !is_feasible_solution(b) || va == vb) {
    throw InternalError("constructed witness does not separate objective values");
  }
  return {std::move(a), std::move(b), std::move(va), std::move(vb)};
}

}  // namespace

CovpVerdict covp_check_planar_p2(const CostTensor& c) {
  const auto [d, n] = require_cube(c, 2);
  CovpVerdict verdict;
  const Extents corner_dims(static_cast<std::size_t>(d), n - 1);
  IndexTuple k(static_cast<std::size_t>(d), 1);
  IndexTuple x(static_cast<std::size_t>(d));
  do {
    Rational alternating;
    for (std::uint32_t mask = 0; mask < (1U << d); ++mask) {
      for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = (mask >> j) & 1U ? 1 : k[static_cast<std::size_t>(j)] + 1;
      if (std::popcount(mask) % 2 == 0) {
        alternating += c.at(x);
      } else {
        alternating -= c.at(x);
      }
    }
    if (!alternating.is_zero()) {
      IndexTuple corner = k;
      for (int& v : corner) ++v;
      verdict.violation = corner;
      break;
    }
  } while (next_index(k, corner_dims));

  if (!verdict.violation) {
    ConstructiveResult built = decompose_planar_constructive(c);
    if (!built.reconstructs()) throw InternalError("P_2 holds but the constructive decomposition does not reconstruct");
    verdict.status = CovpStatus::holds;
    verdict.sum_decomposable = true;
    verdict.decomposition = std::move(built.decomposition);
    // Any solution gives the common value; the identity-based hypercube is simplest.
    auto first = enumerate_planar(d, n, SearchBudget{std::numeric_limits<std::uint64_t>::max(), 1});
    if (!first.solutions.empty()) verdict.common_value = objective(c, first.solutions.front());
    return verdict;
  }

  verdict.status = CovpStatus::fails;
  verdict.sum_decomposable = false;
  const IndexTuple& corner = *verdict.violation;
  if (n == 2) {
    std::vector<IndexTuple> even, odd;
    IndexTuple t(static_cast<std::size_t>(d), 1);
    do {
      int twos = static_cast<int>(std::count(t.begin(), t.end(), 2));
      (twos % 2 == 0 ? even : odd).push_back(t);
    } while (next_index(t, c.dims()));
    verdict.witness = make_witness(c, FeasibleSolution(d, d - 1, n, even), FeasibleSolution(d, d - 1, n, odd));
  } else if (n >= 4) {
    auto [a, b] = planar_lift(d, n, corner);
    verdict.witness = make_witness(c, std::move(a), std::move(b));
  } else {
    CovpVerdict brute = covp_check_bruteforce(c, d - 1, SearchBudget::unlimited());
    if (!brute.witness) throw InternalError("P_2 fails at n = 3 but all planar solutions agree");
    verdict.witness = std::move(brute.witness);
    verdict.solutions_checked = brute.solutions_checked;
  }
  return verdict;
}

std::pair<FeasibleSolution, FeasibleSolution> axial_exchange_pair(int n, std::span<const int> x, std::span<const int> y,
                                                                   int axis) {
  const auto d = static_cast<int>(x.size());
  std::vector<std::vector<int>> rest(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    for (int v = 1; v <= n; ++v) {
      if (v != x[static_cast<std::size_t>(j)] && v != y[static_cast<std::size_t>(j)]) rest[static_cast<std::size_t>(j)].push_back(v);
    }
  }
  std::vector<IndexTuple> common;
  for (int r = 0; r + 2 < n; ++r) {
    IndexTuple t(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) t[static_cast<std::size_t>(j)] = rest[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
    common.push_back(std::move(t));
  }
  IndexTuple xs(x.begin(), x.end()), ys(y.begin(), y.end());
  std::swap(xs[static_cast<std::size_t>(axis)], ys[static_cast<std::size_t>(axis)]);
  std::vector<IndexTuple> first = common, second = common;
  first.emplace_back(x.begin(), x.end());
  first.emplace_back(y.begin(), y.end());
  second.push_back(std::move(xs));
  second.push_back(std::move(ys));
  return {FeasibleSolution(d, 1, n, std::move(first)), FeasibleSolution(d, 1, n, std::move(second))};
}

CovpVerdict covp_check_axial_fast(const CostTensor& c) {
  const auto [d, n] = require_cube(c, 2);
  CovpVerdict verdict;
  ConstructiveResult built = decompose_axial_constructive(c);
  if (built.reconstructs()) {
    Rational value;
    for (const auto& comp : built.decomposition.components) {
      for (const auto& x : comp.values.data()) value += x;
    }
    verdict.status = CovpStatus::holds;
    verdict.common_value = value;
    verdict.sum_decomposable = true;
    verdict.decomposition = std::move(built.decomposition);
    return verdict;
  }
  verdict.sum_decomposable = false;
  verdict.violation = built.mismatch;

  // Exchange search, starting from the mismatching tuple.
  const std::size_t total = c.size();
  const std::size_t start = flatten_index(*built.mismatch, c.dims());
  auto try_pair = [&](std::size_t xo, std::size_t yo) -> bool {
    IndexTuple x = unflatten_index(xo, c.dims());
    IndexTuple y = unflatten_index(yo, c.dims());
    for (int j = 0; j < d; ++j) {
      if (x[static_cast<std::size_t>(j)] == y[static_cast<std::size_t>(j)]) return false;
    }
    for (int axis = 1; axis < d; ++axis) {
      IndexTuple xs = x, ys = y;
      std::swap(xs[static_cast<std::size_t>(axis)], ys[static_cast<std::size_t>(axis)]);
      if (c[xo] + c[yo] != c.at(xs) + c.at(ys)) {
        auto [a, b] = axial_exchange_pair(n, x, y, axis);
        verdict.witness = make_witness(c, std::move(a), std::move(b));
        return true;
      }
    }
    return false;
  };
  for (std::size_t yo = 0; yo < total; ++yo) {
    if (try_pair(start, yo)) break;
  }
  for (std::size_t xo = 0; xo < total && !verdict.witness; ++xo) {
    for (std::size_t yo = xo + 1; yo < total; ++yo) {
      if (try_pair(xo, yo)) break;
    }
  }
  if (verdict.witness) {
    verdict.status = CovpStatus::fails;
    return verdict;
  }
  // Every single-axis exchange preserves the objective, so all solutions agree.
  verdict.status = CovpStatus::holds;
  std::vector<IndexTuple> diagonal;
  for (int i = 1; i <= n; ++i) diagonal.emplace_back(static_cast<std::size_t>(d), i);
  verdict.common_value = objective(c, FeasibleSolution(d, 1, n, std::move(diagonal)));
  return verdict;
}

IncidenceMatrix build_incidence(const std::vector<FeasibleSolution>& solutions, int d, int n) {
  if (d < 1 || n < 1) throw InputError("incidence matrix needs d >= 1 and n >= 1");
  const Extents dims(static_cast<std::size_t>(d), n);
  IncidenceMatrix out{ExactMatrix(solutions.size(), element_count(dims)), solutions, d, n};
  for (std::size_t r = 0; r < solutions.size(); ++r) {
    const auto& f = solutions[r];
    if (f.d() != d || f.n() != n) throw InputError("solution parameters differ from the incidence matrix");
    for (std::size_t i = 0; i < f.size(); ++i) out.matrix(r, flatten_index(f.tuple(i), dims)) = Rational(1);
  }
  return out;
}

std::uint64_t covp_space_dimension(int d, int s, int n, const SearchBudget& budget) {
  const Extents dims(static_cast<std::size_t>(d), n);
  const std::size_t cols = element_count(dims);
  RowSpace space(cols + 1);
  std::vector<Rational> row(cols + 1);
  StreamStatus st = stream_general(d, s, n, budget, [&](const FeasibleSolution& f) {
    std::fill(row.begin(), row.end(), Rational(0));
    for (std::size_t i = 0; i < f.size(); ++i) row[flatten_index(f.tuple(i), dims)] = Rational(1);
    row[cols] = Rational(1);
    space.insert(row);
    return true;
  });
  if (!st.complete) {
    throw BudgetExhausted("enumeration of the (" + std::to_string(d) + "," + std::to_string(s) + ")-AP at n = " +
                          std::to_string(n) + " stopped after " + std::to_string(st.nodes) + " nodes");
  }
  return cols + 1 - space.rank();
}

namespace {

ExactMatrix small(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<std::vector<Rational>> out;
  for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
  return ExactMatrix::from_rows(out);
}

ExactMatrix blocks2x3(const ExactMatrix& a, const ExactMatrix& b, const ExactMatrix& c, const ExactMatrix& d,
                      const ExactMatrix& e, const ExactMatrix& f) {
  ExactMatrix top = hconcat({a, b, c});
  ExactMatrix bottom = hconcat({d, e, f});
  return vconcat({top, bottom});
}

ExactMatrix blocks2x2(const ExactMatrix& a, const ExactMatrix& b, const ExactMatrix& c, const ExactMatrix& d) {
  ExactMatrix top = hconcat({a, b});
  ExactMatrix bottom = hconcat({c, d});
  return vconcat({top, bottom});
}

Rational power_of_three(unsigned long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 3, e);
  return Rational(mpq_class(p));
}

}  // namespace

BlockTriple build_blocks(int k) {
  if (k < 0) throw InputError("block level must be nonnegative");
  BlockTriple t{small({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), small({{0, 1, 0}, {1, 0, 0}, {1, 0, 0}}),
                small({{0, 0, 1}, {0, 0, 1}, {0, 1, 0}})};
  for (int level = 1; level <= k; ++level) {
    BlockTriple next{blocks2x3(t.a, t.b, t.c, t.a, t.c, t.b), blocks2x3(t.b, t.c, t.a, t.b, t.a, t.c),
                     blocks2x3(t.c, t.a, t.b, t.c, t.b, t.a)};
    t = std::move(next);
  }
  return t;
}

ExactMatrix build_Md(int d) {
  if (d < 1) throw InputError("M_d needs d >= 1");
  return build_blocks(d - 1).a;
}

BlockTriple build_reduced(int k) {
  if (k < 0) throw InputError("block level must be nonnegative");
  BlockTriple t{small({{1, 0}, {0, 1}}), small({{0, 1}, {1, 0}}), small({{0, 0}, {0, 0}})};
  for (int level = 1; level <= k; ++level) {
    BlockTriple next{blocks2x2(t.a, t.b, t.a, t.c), blocks2x2(t.b, t.c, t.b, t.a), blocks2x2(t.c, t.a, t.c, t.b)};
    t = std::move(next);
  }
  return t;
}

namespace {

struct Selection {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

Selection reduced_selection(int k) {
  Selection sel;
  const std::size_t rows = 3 * (std::size_t{1} << k);
  std::size_t cols = 1;
  for (int i = 0; i <= k; ++i) cols *= 3;
  for (std::size_t r = 0; r < rows; ++r) {
    if ((r + 1) % 3 != 0) sel.rows.push_back(r);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    bool binary = true;
    for (std::size_t x = c; x > 0; x /= 3) binary = binary && x % 3 != 2;
    if (binary) sel.cols.push_back(c);
  }
  return sel;
}

}  // namespace

BlockTriple build_reduced_by_deletion(int k) {
  BlockTriple full = build_blocks(k);
  Selection sel = reduced_selection(k);
  return {full.a.submatrix(sel.rows, sel.cols), full.b.submatrix(sel.rows, sel.cols),
          full.c.submatrix(sel.rows, sel.cols)};
}

ExactMatrix build_Md_prime(int d) {
  ExactMatrix md = build_Md(d);
  Selection sel = reduced_selection(d - 1);
  sel.rows.push_back(2);
  sel.cols.push_back(2);
  std::sort(sel.rows.begin(), sel.rows.end());
  std::sort(sel.cols.begin(), sel.cols.end());
  return md.submatrix(sel.rows, sel.cols);
}

DetSequence det_sequence(int k_max) {
  if (k_max < 0) throw InputError("k_max must be nonnegative");
  DetSequence seq;
  seq.k_max = k_max;
  const Rational two(2);
  for (int k = 0; k <= k_max; ++k) {
    BlockTriple p = build_reduced(k);
    seq.z.push_back(determinant(p.a));
    seq.u.push_back(determinant(p.c - p.b));
    seq.v.push_back(determinant(p.b + p.c - two * p.a));
    if (k == 0) {
      seq.z_rec.push_back(seq.z[0]);
      seq.u_rec.push_back(seq.u[0]);
      seq.v_rec.push_back(seq.v[0]);
    } else {
      const auto j = static_cast<std::size_t>(k - 1);
      seq.z_rec.push_back(seq.z_rec[j] * seq.u_rec[j]);
      seq.u_rec.push_back(seq.u_rec[j] * seq.v_rec[j]);
      seq.v_rec.push_back(power_of_three(1UL << k) * seq.v_rec[j] * seq.u_rec[j]);
    }
  }
  for (int k = 0; k <= k_max; ++k) {
    const auto i = static_cast<std::size_t>(k);
    seq.recursion_consistent = seq.recursion_consistent && seq.z[i] == seq.z_rec[i] && seq.u[i] == seq.u_rec[i] &&
                               seq.v[i] == seq.v_rec[i];
    seq.z_nonzero = seq.z_nonzero && !seq.z[i].is_zero();
    if (k >= 2) {
      const unsigned long half = 1UL << (k - 1);
      seq.magnitudes_consistent = seq.magnitudes_consistent &&
                                  seq.z[i].abs() == power_of_three(static_cast<unsigned long>(k - 2) * half + 1) &&
                                  seq.u[i].abs() == power_of_three(static_cast<unsigned long>(k) * half);
    }
  }
  return seq;
}

RankReport verify_rank_Md(int d, bool compare_incidence) {
  if (d < 1 || d > 10) throw InputError("rank check supports 1 <= d <= 10");
  RankReport report;
  report.d = d;
  ExactMatrix md = build_Md(d);
  report.rank = rank(md);
  report.expected = (std::size_t{1} << d) + 1;
  report.det_Md_prime = determinant(build_Md_prime(d));
  if (compare_incidence) {
    auto sols = d == 1 ? std::vector<FeasibleSolution>{} : enumerate_planar(d, 3, SearchBudget::unlimited()).solutions;
    if (d == 1) {
      for (int i = 1; i <= 3; ++i) sols.push_back(FeasibleSolution::from_sorted(1, 0, 3, {i}));
    }
    ExactMatrix inc = build_incidence(sols, d, 3).matrix;
    auto row_keys = [](const ExactMatrix& m) {
      std::vector<std::vector<bool>> keys;
      for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<bool> key;
        for (const auto& x : m.row(r)) key.push_back(!x.is_zero());
        keys.push_back(std::move(key));
      }
      std::sort(keys.begin(), keys.end());
      return keys;
    };
    report.matches_incidence = md.cols() == inc.cols() && row_keys(md) == row_keys(inc);
  }
  return report;
}

CostTensor counterexample_array() {
  CostTensor c = CostTensor::cube(4, 3);
  IndexTuple t(4, 1);
  const Extents box(4, 2);
  do {
    if (std::count(t.begin(), t.end(), 2) % 2 == 1) c.at(t) = Rational(1);
  } while (next_index(t, box));
  c.at(IndexTuple{3, 3, 3, 3}) = Rational(1);
  return c;
}

ConjectureReport conjecture_experiment(int d, int s, int n, const SearchBudget& budget) {
  ConjectureReport report{d, s, n};
  report.savs_dim = savs_dimension(d, s, n);
  try {
    report.covp_dim = covp_space_dimension(d, s, n, budget);
    report.complete = true;
  } catch (const BudgetExhausted&) {
    report.complete = false;
  }
  return report;
}

}  // namespace covpkit
