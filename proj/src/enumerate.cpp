#include "covpkit/enumerate.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "covpkit/errors.hpp"
#include "covpkit/savs.hpp"

namespace covpkit {

FeasibleSolution::FeasibleSolution(int d, int s, int n, std::vector<IndexTuple> tuples) : d_(d), s_(s), n_(n) {
  std::sort(tuples.begin(), tuples.end());
  coords_.reserve(tuples.size() * static_cast<std::size_t>(d));
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != d) throw InputError("tuple length does not match d = " + std::to_string(d));
    coords_.insert(coords_.end(), t.begin(), t.end());
  }
}

FeasibleSolution FeasibleSolution::from_sorted(int d, int s, int n, std::vector<int> coords) {
  FeasibleSolution f;
  f.d_ = d;
  f.s_ = s;
  f.n_ = n;
  f.coords_ = std::move(coords);
  return f;
}

std::vector<IndexTuple> FeasibleSolution::tuples() const {
  std::vector<IndexTuple> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto t = tuple(i);
    out.emplace_back(t.begin(), t.end());
  }
  return out;
}

bool LatinSquare::valid() const {
  if (n < 1 || grid.size() != static_cast<std::size_t>(n * n)) return false;
  for (int r = 1; r <= n; ++r) {
    std::vector<bool> row(static_cast<std::size_t>(n) + 1), col(static_cast<std::size_t>(n) + 1);
    for (int c = 1; c <= n; ++c) {
      int a = at(r, c);
      int b = at(c, r);
      if (a < 1 || a > n || b < 1 || b > n || row[static_cast<std::size_t>(a)] || col[static_cast<std::size_t>(b)]) return false;
      row[static_cast<std::size_t>(a)] = col[static_cast<std::size_t>(b)] = true;
    }
  }
  return true;
}

LatinSquare latin_square_of(const FeasibleSolution& f) {
  if (f.d() < 3) throw InputError("a Latin square needs three coordinates");
  LatinSquare sq{f.n(), std::vector<int>(static_cast<std::size_t>(f.n() * f.n()), 0)};
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto t = f.tuple(i);
    sq.grid[static_cast<std::size_t>((t[0] - 1) * f.n() + (t[1] - 1))] = t[2];
  }
  return sq;
}

SearchBudget SearchBudget::from_env() {
  SearchBudget b;
  if (const char* env = std::getenv("COVPKIT_MAX_NODES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw InputError("COVPKIT_MAX_NODES must be a positive integer");
    b.max_nodes = v;
  }
  return b;
}

SearchBudget SearchBudget::unlimited() {
  return {std::numeric_limits<std::uint64_t>::max(), std::numeric_limits<std::uint64_t>::max()};
}

std::size_t int_power(int n, int e) {
  std::size_t out = 1;
  for (int i = 0; i < e; ++i) {
    if (out > (std::size_t{1} << 40) / static_cast<std::size_t>(std::max(n, 1))) throw InputError("instance too large");
    out *= static_cast<std::size_t>(n);
  }
  return out;
}

namespace {

void check_shape(int d, int s, int n) {
  if (d < 2) throw InputError("need d >= 2, got " + std::to_string(d));
  if (s <= 0 || s >= d) throw InputError("need 0 < s < d, got s = " + std::to_string(s));
  if (n < 1) throw InputError("need n >= 1, got " + std::to_string(n));
  if (n > 63) throw InputError("n > 63 is beyond enumeration reach");
}

// Budget accounting and emission shared by every enumerator.
class Driver {
 public:
  Driver(int d, int s, int n, const SearchBudget& budget, const SolutionVisitor& visit)
      : d_(d), s_(s), n_(n), budget_(budget), visit_(visit) {}

  bool expand() {
    if (halted_) return false;
    if (++status_.nodes > budget_.max_nodes) halt_incomplete();
    return !halted_;
  }

  void emit(std::vector<int> coords) {
    if (halted_) return;
    if (status_.emitted >= budget_.max_solutions) {
      halt_incomplete();
      return;
    }
    ++status_.emitted;
    if (!visit_(FeasibleSolution::from_sorted(d_, s_, n_, std::move(coords)))) {
      status_.stopped = true;
      status_.complete = false;
      halted_ = true;
    }
  }

  [[nodiscard]] bool halted() const noexcept { return halted_; }
  [[nodiscard]] StreamStatus status() const noexcept { return status_; }

 private:
  void halt_incomplete() {
    status_.complete = false;
    halted_ = true;
  }

  int d_, s_, n_;
  SearchBudget budget_;
  const SolutionVisitor& visit_;
  StreamStatus status_;
  bool halted_ = false;
};

using Mask = std::uint64_t;

Mask bit(int v) { return Mask{1} << v; }

}  // namespace

StreamStatus stream_axial(int d, int n, const SearchBudget& budget, const SolutionVisitor& visit) {
  check_shape(d, 1, n);
  Driver drv(d, 1, n, budget, visit);
  const auto du = static_cast<std::size_t>(d);
  std::vector<int> coords(static_cast<std::size_t>(n) * du);
  std::vector<Mask> used(du, 0);

  std::function<void(int, int)> place = [&](int i, int axis) {
    if (drv.halted()) return;
    if (i > n) {
      drv.emit(coords);
      return;
    }
    const std::size_t base = static_cast<std::size_t>(i - 1) * du;
    if (axis == d) {
      place(i + 1, 1);
      return;
    }
    coords[base] = i;
    for (int v = 1; v <= n && !drv.halted(); ++v) {
      if (used[static_cast<std::size_t>(axis)] & bit(v)) continue;
      if (!drv.expand()) return;
      used[static_cast<std::size_t>(axis)] |= bit(v);
      coords[base + static_cast<std::size_t>(axis)] = v;
      place(i, axis + 1);
      used[static_cast<std::size_t>(axis)] &= ~bit(v);
    }
  };
  place(1, 1);
  return drv.status();
}

StreamStatus stream_planar(int d, int n, const SearchBudget& budget, const SolutionVisitor& visit) {
  check_shape(d, d - 1, n);
  Driver drv(d, d - 1, n, budget, visit);
  const int m = d - 1;
  const Extents cell_dims(static_cast<std::size_t>(m), n);
  const std::size_t cells = int_power(n, m);
  const std::size_t lines_per_axis = int_power(n, m - 1);

  // line_of[cell * m + a]: the line through `cell` along axis a.
  std::vector<std::size_t> line_of(cells * static_cast<std::size_t>(m));
  IndexTuple t(static_cast<std::size_t>(m), 1);
  for (std::size_t c = 0; c < cells; ++c, next_index(t, cell_dims)) {
    for (int a = 0; a < m; ++a) {
      std::size_t id = 0;
      for (int r = 0; r < m; ++r) {
        if (r != a) id = id * static_cast<std::size_t>(n) + static_cast<std::size_t>(t[static_cast<std::size_t>(r)] - 1);
      }
      line_of[c * static_cast<std::size_t>(m) + static_cast<std::size_t>(a)] = id;
    }
  }

  std::vector<Mask> used(static_cast<std::size_t>(m) * lines_per_axis, 0);
  std::vector<int> value(cells, 0);
  auto slot = [&](std::size_t c, int a) -> Mask& {
    return used[static_cast<std::size_t>(a) * lines_per_axis + line_of[c * static_cast<std::size_t>(m) + static_cast<std::size_t>(a)]];
  };

  std::function<void(std::size_t)> fill = [&](std::size_t c) {
    if (drv.halted()) return;
    if (c == cells) {
      std::vector<int> coords;
      coords.reserve(cells * static_cast<std::size_t>(d));
      IndexTuple u(static_cast<std::size_t>(m), 1);
      for (std::size_t k = 0; k < cells; ++k, next_index(u, cell_dims)) {
        coords.insert(coords.end(), u.begin(), u.end());
        coords.push_back(value[k]);
      }
      drv.emit(std::move(coords));
      return;
    }
    Mask blocked = 0;
    for (int a = 0; a < m; ++a) blocked |= slot(c, a);
    for (int v = 1; v <= n && !drv.halted(); ++v) {
      if (blocked & bit(v)) continue;
      if (!drv.expand()) return;
      for (int a = 0; a < m; ++a) slot(c, a) |= bit(v);
      value[c] = v;
      fill(c + 1);
      for (int a = 0; a < m; ++a) slot(c, a) &= ~bit(v);
    }
  };
  fill(0);
  return drv.status();
}

StreamStatus stream_mols(int d, int n, const SearchBudget& budget, const SolutionVisitor& visit) {
  if (d < 3) throw InputError("MOLS enumeration needs d >= 3");
  check_shape(d, 2, n);
  Driver drv(d, 2, n, budget, visit);
  const int m = d - 2;
  const auto mu = static_cast<std::size_t>(m);
  const auto nu = static_cast<std::size_t>(n);
  std::vector<Mask> row_used(mu * nu, 0), col_used(mu * nu, 0);
  // pair_used[(a * m + b) * n + x]: symbols y already paired with x in squares a < b.
  std::vector<Mask> pair_used(mu * mu * nu, 0);
  std::vector<int> squares(mu * nu * nu, 0);  // squares[(k * n + cell)]

  std::function<void(int, int)> fill = [&](int cell, int k) {
    if (drv.halted()) return;
    if (cell == n * n) {
      std::vector<int> coords;
      coords.reserve(nu * nu * static_cast<std::size_t>(d));
      for (int c = 0; c < n * n; ++c) {
        coords.push_back(c / n + 1);
        coords.push_back(c % n + 1);
        for (std::size_t q = 0; q < mu; ++q) coords.push_back(squares[q * nu * nu + static_cast<std::size_t>(c)]);
      }
      drv.emit(std::move(coords));
      return;
    }
    if (k == m) {
      fill(cell + 1, 0);
      return;
    }
    const auto r = static_cast<std::size_t>(cell / n);
    const auto c = static_cast<std::size_t>(cell % n);
    const auto ku = static_cast<std::size_t>(k);
    Mask blocked = row_used[ku * nu + r] | col_used[ku * nu + c];
    for (std::size_t a = 0; a < ku; ++a) {
      int x = squares[a * nu * nu + static_cast<std::size_t>(cell)];
      blocked |= pair_used[(a * mu + ku) * nu + static_cast<std::size_t>(x - 1)];
    }
    for (int v = 1; v <= n && !drv.halted(); ++v) {
      if (blocked & bit(v)) continue;
      if (!drv.expand()) return;
      row_used[ku * nu + r] |= bit(v);
      col_used[ku * nu + c] |= bit(v);
      for (std::size_t a = 0; a < ku; ++a) {
        int x = squares[a * nu * nu + static_cast<std::size_t>(cell)];
        pair_used[(a * mu + ku) * nu + static_cast<std::size_t>(x - 1)] |= bit(v);
      }
      squares[ku * nu * nu + static_cast<std::size_t>(cell)] = v;
      fill(cell, k + 1);
      row_used[ku * nu + r] &= ~bit(v);
      col_used[ku * nu + c] &= ~bit(v);
      for (std::size_t a = 0; a < ku; ++a) {
        int x = squares[a * nu * nu + static_cast<std::size_t>(cell)];
        pair_used[(a * mu + ku) * nu + static_cast<std::size_t>(x - 1)] &= ~bit(v);
      }
    }
  };
  fill(0, 0);
  return drv.status();
}

StreamStatus stream_oa_backtrack(int d, int s, int n, const SearchBudget& budget, const SolutionVisitor& visit) {
  check_shape(d, s, n);
  Driver drv(d, s, n, budget, visit);
  const auto du = static_cast<std::size_t>(d);
  const std::size_t keys = int_power(n, s);
  const Extents key_dims(static_cast<std::size_t>(s), n);

  // Constraint classes other than the key itself, grouped by their last member.
  std::vector<IndexSubset> qs;
  for (auto& q : index_subsets(d, s)) {
    if (q.back() > s) qs.push_back(std::move(q));
  }
  std::vector<std::vector<std::size_t>> closes_at(du);
  for (std::size_t j = 0; j < qs.size(); ++j) closes_at[static_cast<std::size_t>(qs[j].back() - 1)].push_back(j);
  std::vector<std::vector<char>> used(qs.size(), std::vector<char>(keys, 0));
  auto class_of = [&](std::size_t j, const int* t) {
    std::size_t id = 0;
    for (int k : qs[j]) id = id * static_cast<std::size_t>(n) + static_cast<std::size_t>(t[k - 1] - 1);
    return id;
  };

  std::vector<int> coords(keys * du);
  IndexTuple key(static_cast<std::size_t>(s), 1);

  std::function<void(std::size_t, std::size_t)> place = [&](std::size_t row, std::size_t pos) {
    if (drv.halted()) return;
    if (row == keys) {
      drv.emit(coords);
      return;
    }
    int* t = coords.data() + row * du;
    if (pos == du) {
      IndexTuple saved = key;
      next_index(key, key_dims);
      if (row + 1 < keys) std::copy(key.begin(), key.end(), coords.data() + (row + 1) * du);
      place(row + 1, static_cast<std::size_t>(s));
      key = std::move(saved);
      return;
    }
    for (int v = 1; v <= n && !drv.halted(); ++v) {
      t[pos] = v;
      bool ok = true;
      for (std::size_t j : closes_at[pos]) {
        if (used[j][class_of(j, t)]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (!drv.expand()) return;
      for (std::size_t j : closes_at[pos]) used[j][class_of(j, t)] = 1;
      place(row, pos + 1);
      for (std::size_t j : closes_at[pos]) used[j][class_of(j, t)] = 0;
    }
  };
  std::copy(key.begin(), key.end(), coords.begin());
  place(0, static_cast<std::size_t>(s));
  return drv.status();
}

StreamStatus stream_general(int d, int s, int n, const SearchBudget& budget, const SolutionVisitor& visit) {
  check_shape(d, s, n);
  if (s == 1) return stream_axial(d, n, budget, visit);
  if (s == d - 1) return stream_planar(d, n, budget, visit);
  if (s == 2) return stream_mols(d, n, budget, visit);
  return stream_oa_backtrack(d, s, n, budget, visit);
}

namespace {

template <typename Stream>
EnumerationResult collect(Stream&& stream) {
  EnumerationResult out;
  StreamStatus st = stream([&](const FeasibleSolution& f) {
    out.solutions.push_back(f);
    return true;
  });
  out.complete = st.complete;
  out.nodes = st.nodes;
  return out;
}

}  // namespace

EnumerationResult enumerate_axial(int d, int n, const SearchBudget& budget) {
  return collect([&](const SolutionVisitor& v) { return stream_axial(d, n, budget, v); });
}

EnumerationResult enumerate_planar(int d, int n, const SearchBudget& budget) {
  return collect([&](const SolutionVisitor& v) { return stream_planar(d, n, budget, v); });
}

EnumerationResult enumerate_mols(int d, int n, const SearchBudget& budget) {
  return collect([&](const SolutionVisitor& v) { return stream_mols(d, n, budget, v); });
}

EnumerationResult enumerate_oa_backtrack(int d, int s, int n, const SearchBudget& budget) {
  return collect([&](const SolutionVisitor& v) { return stream_oa_backtrack(d, s, n, budget, v); });
}

EnumerationResult enumerate_general(int d, int s, int n, const SearchBudget& budget) {
  return collect([&](const SolutionVisitor& v) { return stream_general(d, s, n, budget, v); });
}

bool is_feasible_solution(const FeasibleSolution& f) {
  const int d = f.d(), s = f.s(), n = f.n();
  if (d < 2 || s <= 0 || s >= d || n < 1) return false;
  const std::size_t classes = int_power(n, s);
  if (f.size() != classes) return false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (int x : f.tuple(i)) {
      if (x < 1 || x > n) return false;
    }
  }
  for (const auto& q : index_subsets(d, s)) {
    std::vector<char> seen(classes, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::size_t id = 0;
      auto t = f.tuple(i);
      for (int k : q) id = id * static_cast<std::size_t>(n) + static_cast<std::size_t>(t[static_cast<std::size_t>(k - 1)] - 1);
      if (seen[id]) return false;
      seen[id] = 1;
    }
  }
  return true;
}

Rational objective(const CostTensor& c, const FeasibleSolution& f) {
  if (c.order() != f.d()) {
    throw InputError("solution has " + std::to_string(f.d()) + " coordinates, tensor has " + std::to_string(c.order()));
  }
  Rational total;
  for (std::size_t i = 0; i < f.size(); ++i) total += c.at(f.tuple(i));
  return total;
}

}  // namespace covpkit
