#include "covpkit/graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>
#include <set>

#include "covpkit/errors.hpp"
#include "covpkit/matrix.hpp"

namespace covpkit {

namespace {

std::pair<int, int> key(int u, int v, bool directed) {
  if (!directed && u > v) std::swap(u, v);
  return {u, v};
}

/// Dense (n+1) x (n+1) weight table; symmetric for undirected graphs.
class WeightTable {
 public:
  explicit WeightTable(const WeightedGraph& g) : n_(g.n), present_((n_ + 1) * (n_ + 1)), w_(present_.size()) {
    for (const auto& e : g.edges) {
      set(e.u, e.v, e.w);
      if (!g.directed) set(e.v, e.u, e.w);
    }
  }

  [[nodiscard]] bool has(int u, int v) const { return present_[idx(u, v)] != 0; }
  [[nodiscard]] const Rational& operator()(int u, int v) const {
    if (!has(u, v)) throw InputError("no edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    return w_[idx(u, v)];
  }

 private:
  [[nodiscard]] std::size_t idx(int u, int v) const {
    if (u < 1 || v < 1 || u > n_ || v > n_) throw InputError("vertex out of range");
    return static_cast<std::size_t>(u) * (n_ + 1) + v;
  }
  void set(int u, int v, const Rational& w) {
    present_[idx(u, v)] = 1;
    w_[idx(u, v)] = w;
  }

  int n_;
  std::vector<char> present_;
  std::vector<Rational> w_;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n + 1) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

void require_undirected(const WeightedGraph& g, const char* what) {
  if (g.directed) throw InputError(std::string(what) + " needs an undirected graph");
}

void require_complete_undirected(const WeightedGraph& g, int min_n, const char* what) {
  validate_graph(g);
  require_undirected(g, what);
  if (g.n < min_n) throw InputError(std::string(what) + " needs n >= " + std::to_string(min_n));
  const auto expected = static_cast<std::size_t>(g.n) * (g.n - 1) / 2;
  if (g.edges.size() != expected) throw InputError(std::string(what) + " needs a complete graph");
}

bool connected(const WeightedGraph& g) {
  if (g.n <= 1) return true;
  UnionFind uf(g.n);
  int parts = g.n;
  for (const auto& e : g.edges)
    if (uf.unite(e.u, e.v)) --parts;
  return parts == 1;
}

EdgeList path_edges(const std::vector<int>& vertices) {
  EdgeList out;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) out.emplace_back(vertices[i], vertices[i + 1]);
  return out;
}

EdgeList tour_edges(const std::vector<int>& order) {
  EdgeList out = path_edges(order);
  out.emplace_back(order.back(), order.front());
  return out;
}

Rational tour_cost(const CostTensor& c, const std::vector<int>& order) {
  Rational total;
  const int n = static_cast<int>(order.size());
  for (int i = 0; i < n; ++i) {
    const int t[2] = {order[i], order[(i + 1) % n]};
    total += c.at(t);
  }
  return total;
}

GraphWitness make_witness(const WeightedGraph& g, EdgeList a, EdgeList b) {
  GraphWitness w;
  w.first_value = edge_list_cost(g, a);
  w.second_value = edge_list_cost(g, b);
  w.first = std::move(a);
  w.second = std::move(b);
  return w;
}

/// Vertices not in `used`, paired consecutively in increasing order.
EdgeList pair_remaining(int n, std::initializer_list<int> used) {
  EdgeList out;
  int pending = 0;
  for (int v = 1; v <= n; ++v) {
    if (std::find(used.begin(), used.end(), v) != used.end()) continue;
    if (pending == 0) {
      pending = v;
    } else {
      out.emplace_back(pending, v);
      pending = 0;
    }
  }
  return out;
}

EdgeList sorted_edges(EdgeList e) {
  for (auto& [u, v] : e)
    if (u > v) std::swap(u, v);
  std::sort(e.begin(), e.end());
  return e;
}

std::size_t max_matching_size(const WeightedGraph& g) {
  if (g.n > 20) throw InputError("maximum matching size limited to n <= 20");
  std::vector<std::uint32_t> adj(g.n + 1, 0);
  for (const auto& e : g.edges) {
    adj[e.u] |= 1U << e.v;
    adj[e.v] |= 1U << e.u;
  }
  std::vector<int> memo(std::size_t{1} << g.n, -1);
  // free: bitmask over vertices 1..n stored at bit v-1
  auto solve = [&](auto&& self, std::uint32_t free) -> int {
    if (free == 0) return 0;
    int& m = memo[free];
    if (m >= 0) return m;
    const int v = std::countr_zero(free) + 1;
    const std::uint32_t rest = free & ~(1U << (v - 1));
    int best = self(self, rest);
    for (std::uint32_t cand = (adj[v] >> 1) & rest; cand; cand &= cand - 1) {
      const int u = std::countr_zero(cand);
      best = std::max(best, 1 + self(self, rest & ~(1U << u)));
    }
    return m = best;
  };
  return static_cast<std::size_t>(solve(solve, (g.n == 0) ? 0U : ((1U << g.n) - 1)));
}

}  // namespace

void validate_graph(const WeightedGraph& g) {
  if (g.n < 1) throw InputError("graph needs n >= 1");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    if (e.u < 1 || e.v < 1 || e.u > g.n || e.v > g.n)
      throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    if (!g.directed && e.u > e.v) throw InputError("undirected edges must have u < v");
    if (!seen.insert(key(e.u, e.v, g.directed)).second)
      throw InputError("repeated edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
  }
}

WeightedGraph complete_graph(int n, const std::vector<std::vector<Rational>>& w, bool directed) {
  if (static_cast<int>(w.size()) < n) throw InputError("weight table too small");
  WeightedGraph g{n, directed, {}};
  for (int i = 1; i <= n; ++i)
    for (int j = directed ? 1 : i + 1; j <= n; ++j)
      if (i != j) g.edges.push_back({i, j, w[i - 1][j - 1]});
  return g;
}

const char* to_string(ProblemKind k) noexcept {
  switch (k) {
    case ProblemKind::mst:
      return "mst";
    case ProblemKind::sp_undirected:
      return "sp-undir";
    case ProblemKind::sp_directed:
      return "sp-dir";
    case ProblemKind::matching:
      return "matching";
    case ProblemKind::tsp:
      return "tsp";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(const std::string& name) {
  for (auto k : {ProblemKind::mst, ProblemKind::sp_undirected, ProblemKind::sp_directed, ProblemKind::matching,
                 ProblemKind::tsp})
    if (name == to_string(k)) return k;
  throw InputError("unknown problem kind '" + name + "'");
}

const char* to_string(CertificateKind k) noexcept {
  switch (k) {
    case CertificateKind::mst_alphas:
      return "mst_alphas";
    case CertificateKind::sp_undirected_ab:
      return "sp_undirected_ab";
    case CertificateKind::sp_directed_potential:
      return "sp_directed_potential";
    case CertificateKind::matching_potential:
      return "matching_potential";
    case CertificateKind::matching_uniform:
      return "matching_uniform";
    case CertificateKind::tsp_sum_matrix:
      return "tsp_sum_matrix";
  }
  return "unknown";
}

Rational edge_list_cost(const WeightedGraph& g, const EdgeList& edges) {
  WeightTable w(g);
  Rational total;
  for (const auto& [u, v] : edges) total += w(u, v);
  return total;
}

bool is_feasible_for(ProblemKind kind, const WeightedGraph& g, const EdgeList& edges) {
  WeightTable w(g);
  for (const auto& [u, v] : edges)
    if (u < 1 || v < 1 || u > g.n || v > g.n || !w.has(u, v)) return false;

  switch (kind) {
    case ProblemKind::mst: {
      if (edges.size() != static_cast<std::size_t>(g.n - 1)) return false;
      UnionFind uf(g.n);
      for (const auto& [u, v] : edges)
        if (!uf.unite(u, v)) return false;
      return true;
    }
    case ProblemKind::sp_undirected:
    case ProblemKind::sp_directed: {
      if (edges.empty() || edges.front().first != 1 || edges.back().second != g.n) return false;
      std::vector<char> seen(g.n + 1, 0);
      seen[1] = 1;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i > 0 && edges[i].first != edges[i - 1].second) return false;
        if (seen[edges[i].second]++) return false;
      }
      return true;
    }
    case ProblemKind::matching: {
      std::vector<char> used(g.n + 1, 0);
      for (const auto& [u, v] : edges) {
        if (used[u]++ || used[v]++) return false;
      }
      return edges.size() == max_matching_size(g);
    }
    case ProblemKind::tsp: {
      if (edges.size() != static_cast<std::size_t>(g.n) || g.n < 3) return false;
      std::vector<char> seen(g.n + 1, 0);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].second != edges[(i + 1) % edges.size()].first) return false;
        if (seen[edges[i].first]++) return false;
      }
      return true;
    }
  }
  return false;
}

std::vector<std::vector<std::size_t>> cycle_graph_components(const WeightedGraph& g) {
  validate_graph(g);
  require_undirected(g, "cycle graph");
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(g.n + 1);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    adj[g.edges[i].u].emplace_back(g.edges[i].v, i);
    adj[g.edges[i].v].emplace_back(g.edges[i].u, i);
  }

  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<int> disc(g.n + 1, -1), low(g.n + 1, 0);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> edge_stack;
  struct Frame {
    int v;
    std::size_t parent_edge;
    std::size_t next;
  };
  int timer = 0;

  for (int root = 1; root <= g.n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = timer++;
    std::vector<Frame> stack{{root, kNone, 0}};
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.v].size()) {
        const auto [to, eid] = adj[f.v][f.next++];
        if (eid == f.parent_edge) continue;
        if (disc[to] < 0) {
          edge_stack.push_back(eid);
          disc[to] = low[to] = timer++;
          stack.push_back({to, eid, 0});
        } else if (disc[to] < disc[f.v]) {
          edge_stack.push_back(eid);
          low[f.v] = std::min(low[f.v], disc[to]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (stack.empty()) break;
      const int p = stack.back().v;
      low[p] = std::min(low[p], low[done.v]);
      if (low[done.v] >= disc[p]) {
        std::vector<std::size_t> comp;
        while (true) {
          const std::size_t e = edge_stack.back();
          edge_stack.pop_back();
          comp.push_back(e);
          if (e == done.parent_edge) break;
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GraphVerdict mst_covp(const WeightedGraph& g) {
  validate_graph(g);
  require_undirected(g, "mst");
  if (!connected(g)) throw InputError("mst needs a connected graph");

  GraphVerdict verdict;
  auto comps = cycle_graph_components(g);
  bool constant = true;
  for (const auto& comp : comps)
    for (std::size_t e : comp) constant = constant && g.edges[e].w == g.edges[comp.front()].w;

  // BFS tree from vertex 1, edges scanned in input order.
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(g.n + 1);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    adj[g.edges[i].u].emplace_back(g.edges[i].v, i);
    adj[g.edges[i].v].emplace_back(g.edges[i].u, i);
  }
  std::vector<int> parent(g.n + 1, 0), depth(g.n + 1, -1);
  std::vector<std::size_t> parent_edge(g.n + 1, 0);
  std::vector<char> in_tree(g.edges.size(), 0);
  std::deque<int> queue{1};
  depth[1] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& [to, eid] : adj[v]) {
      if (depth[to] >= 0) continue;
      depth[to] = depth[v] + 1;
      parent[to] = v;
      parent_edge[to] = eid;
      in_tree[eid] = 1;
      queue.push_back(to);
    }
  }
  auto tree_list = [&](std::size_t drop, std::size_t add) {
    EdgeList out;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if ((in_tree[i] && i != drop) || i == add) out.emplace_back(g.edges[i].u, g.edges[i].v);
    return out;
  };

  if (constant) {
    verdict.holds = true;
    GraphCertificate cert{CertificateKind::mst_alphas, {}, comps};
    for (const auto& comp : comps) cert.parameters.push_back(g.edges[comp.front()].w);
    verdict.certificate = std::move(cert);
    verdict.common_value = edge_list_cost(g, tree_list(g.edges.size(), g.edges.size()));
    return verdict;
  }

  // Some fundamental cycle carries two weights; exchange along it.
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (in_tree[e]) continue;
    int a = g.edges[e].u, b = g.edges[e].v;
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      const std::size_t f = parent_edge[a];
      if (g.edges[f].w != g.edges[e].w) {
        verdict.witness = make_witness(g, tree_list(g.edges.size(), g.edges.size()), tree_list(f, e));
        return verdict;
      }
      a = parent[a];
    }
  }
  throw InternalError("mst: non-constant component without an exchange witness");
}

GraphVerdict sp_undirected_covp(const WeightedGraph& g) {
  require_complete_undirected(g, 2, "sp-undir");
  for (const auto& e : g.edges)
    if (e.w.sign() < 0) throw InputError("sp-undir needs nonnegative weights");
  const WeightTable w(g);
  const int n = g.n;

  GraphVerdict verdict;
  if (n == 2) {
    verdict.holds = true;
    verdict.common_value = w(1, 2);
    verdict.certificate = GraphCertificate{CertificateKind::sp_undirected_ab, {w(1, 2), Rational{}}, {}};
    verdict.note = "n = 2: the single edge is the only path";
    return verdict;
  }

  const Rational a = w(1, 2);
  const Rational b = w(2, n);
  bool pattern = true;
  for (const auto& e : g.edges) {
    Rational expected;
    if (e.u == 1 && e.v == n)
      expected = a + b;
    else if (e.u == 1)
      expected = a;
    else if (e.v == n)
      expected = b;
    pattern = pattern && e.w == expected;
  }
  if (pattern) {
    verdict.holds = true;
    verdict.common_value = a + b;
    verdict.certificate = GraphCertificate{CertificateKind::sp_undirected_ab, {a, b}, {}};
    return verdict;
  }

  const std::vector<int> direct{1, n};
  if (n == 3) {
    verdict.witness = make_witness(g, path_edges(direct), path_edges({1, 2, 3}));
    return verdict;
  }
  const Rational base = w(1, n);
  for (int i = 2; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (const std::vector<int>& p :
           {std::vector<int>{1, i, n}, std::vector<int>{1, j, n}, std::vector<int>{1, i, j, n},
            std::vector<int>{1, j, i, n}}) {
        auto edges = path_edges(p);
        if (edge_list_cost(g, edges) != base) {
          verdict.witness = make_witness(g, path_edges(direct), std::move(edges));
          return verdict;
        }
      }
    }
  }
  throw InternalError("sp-undir: pattern fails but the five-path system agrees");
}

GraphVerdict sp_directed_covp(const WeightedGraph& g) {
  validate_graph(g);
  if (!g.directed) throw InputError("sp-dir needs a directed graph");
  if (g.n < 2) throw InputError("sp-dir needs n >= 2");
  for (const auto& e : g.edges)
    if (e.u >= e.v) throw InputError("sp-dir edges must satisfy i < j");
  if (g.edges.size() != static_cast<std::size_t>(g.n) * (g.n - 1) / 2)
    throw InputError("sp-dir needs every arc (i,j) with i < j");
  const WeightTable w(g);
  const int n = g.n;

  std::vector<Rational> a(n);
  for (int i = 2; i <= n; ++i) a[i - 1] = w(1, i);

  GraphVerdict verdict;
  for (int i = 2; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (w(i, j) == a[j - 1] - a[i - 1]) continue;
      if (j == n)
        verdict.witness = make_witness(g, path_edges({1, i, n}), path_edges({1, n}));
      else
        verdict.witness = make_witness(g, path_edges({1, i, j, n}), path_edges({1, j, n}));
      return verdict;
    }
  }
  verdict.holds = true;
  verdict.common_value = a[n - 1];
  verdict.certificate = GraphCertificate{CertificateKind::sp_directed_potential, std::move(a), {}};
  return verdict;
}

GraphVerdict matching_covp(const WeightedGraph& g) {
  require_complete_undirected(g, 2, "matching");
  const WeightTable w(g);
  const int n = g.n;
  GraphVerdict verdict;

  if (n % 2 == 1) {
    const Rational& first = g.edges.front().w;
    if (std::all_of(g.edges.begin(), g.edges.end(), [&](const Edge& e) { return e.w == first; })) {
      verdict.holds = true;
      verdict.common_value = first * Rational((n - 1) / 2);
      verdict.certificate = GraphCertificate{CertificateKind::matching_uniform, {first}, {}};
      return verdict;
    }
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) {
          if (i == j || i == k || w(i, j) == w(i, k)) continue;
          auto rest = pair_remaining(n, {i, j, k});
          EdgeList m1 = rest, m2 = rest;
          m1.emplace_back(i, j);
          m2.emplace_back(i, k);
          verdict.witness = make_witness(g, sorted_edges(m1), sorted_edges(m2));
          return verdict;
        }
    throw InternalError("matching: unequal weights without adjacent pair");
  }

  std::vector<Rational> a(n);
  if (n == 2) {
    a[0] = a[1] = w(1, 2) / Rational(2);
  } else {
    for (int i = 1; i <= n; ++i) {
      int j = 0, k = 0;
      for (int v = 1; v <= n && k == 0; ++v) {
        if (v == i) continue;
        (j == 0 ? j : k) = v;
      }
      a[i - 1] = (w(i, j) + w(i, k) - w(j, k)) / Rational(2);
    }
  }
  bool potential = true;
  for (const auto& e : g.edges) potential = potential && e.w == a[e.u - 1] + a[e.v - 1];
  if (potential) {
    verdict.holds = true;
    verdict.common_value = std::accumulate(a.begin(), a.end(), Rational{});
    verdict.certificate = GraphCertificate{CertificateKind::matching_potential, std::move(a), {}};
    return verdict;
  }

  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          const EdgeList pairings[3] = {{{i, j}, {k, l}}, {{i, k}, {j, l}}, {{i, l}, {j, k}}};
          Rational cost[3];
          for (int p = 0; p < 3; ++p) cost[p] = edge_list_cost(g, pairings[p]);
          for (int p = 1; p < 3; ++p) {
            if (cost[p] == cost[0]) continue;
            auto rest = pair_remaining(n, {i, j, k, l});
            EdgeList m1 = rest, m2 = rest;
            m1.insert(m1.end(), pairings[0].begin(), pairings[0].end());
            m2.insert(m2.end(), pairings[p].begin(), pairings[p].end());
            verdict.witness = make_witness(g, sorted_edges(m1), sorted_edges(m2));
            return verdict;
          }
        }
  throw InternalError("matching: no potential and no 4-cycle exchange");
}

CostTensor tsp_matrix(const WeightedGraph& g) {
  validate_graph(g);
  const WeightTable w(g);
  CostTensor c({g.n, g.n});
  for (int i = 1; i <= g.n; ++i)
    for (int j = 1; j <= g.n; ++j) {
      if (i == j) continue;
      const int t[2] = {i, j};
      c.at(t) = w(i, j);
    }
  return c;
}

GraphVerdict tsp_covp(const CostTensor& c) {
  if (c.order() != 2 || !c.is_cubic()) throw InputError("tsp needs a square matrix");
  const int n = c.extent();
  if (n < 3) throw InputError("tsp needs n >= 3");

  const auto nn = static_cast<std::size_t>(n);
  ExactMatrix a(nn * (nn - 1), 2 * nn);
  std::vector<Rational> rhs;
  rhs.reserve(a.rows());
  std::size_t row = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      a(row, i - 1) = 1;
      a(row, nn + j - 1) = 1;
      const int t[2] = {i, j};
      rhs.push_back(c.at(t));
      ++row;
    }
  auto sol = solve_linear(a, rhs, false);

  GraphVerdict verdict;
  if (sol.consistent) {
    verdict.holds = true;
    verdict.common_value = std::accumulate(sol.particular.begin(), sol.particular.end(), Rational{});
    verdict.certificate = GraphCertificate{CertificateKind::tsp_sum_matrix, std::move(sol.particular), {}};
    return verdict;
  }

  auto as_graph_witness = [&](const std::vector<int>& x, const std::vector<int>& y) {
    return GraphWitness{tour_edges(x), tour_edges(y), tour_cost(c, x), tour_cost(c, y)};
  };
  std::vector<int> base(nn);
  std::iota(base.begin(), base.end(), 1);
  const Rational base_cost = tour_cost(c, base);

  if (n <= 8) {
    std::vector<int> tour = base;
    while (std::next_permutation(tour.begin() + 1, tour.end())) {
      if (tour_cost(c, tour) != base_cost) {
        verdict.witness = as_graph_witness(base, tour);
        return verdict;
      }
    }
    throw InternalError("tsp: not a sum matrix yet every tour has equal cost");
  }

  // Breadth-first over position swaps (vertex 1 fixed), bounded.
  constexpr std::size_t kLimit = 200000;
  std::set<std::vector<int>> seen{base};
  std::deque<std::vector<int>> queue{base};
  while (!queue.empty() && seen.size() < kLimit) {
    const auto cur = queue.front();
    queue.pop_front();
    for (int p = 1; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        auto next = cur;
        std::swap(next[p], next[q]);
        if (!seen.insert(next).second) continue;
        if (tour_cost(c, next) != base_cost) {
          verdict.witness = as_graph_witness(base, next);
          return verdict;
        }
        queue.push_back(std::move(next));
      }
  }
  verdict.note = "witness search exhausted its bound";
  return verdict;
}

namespace {

void require_at_most(int n, int bound, const char* what) {
  if (n > bound) throw InputError(std::string(what) + " oracle limited to n <= " + std::to_string(bound));
}

struct Collector {
  const WeightedGraph* g = nullptr;
  const CostTensor* c = nullptr;
  OracleVerdict v;
  EdgeList first;

  void add(EdgeList sol, const Rational& value) {
    ++v.solutions;
    if (!v.common_value) {
      v.common_value = value;
      first = std::move(sol);
      return;
    }
    if (!v.witness && value != *v.common_value) v.witness = GraphWitness{first, std::move(sol), *v.common_value, value};
  }
  void add(EdgeList sol) {
    const Rational value = edge_list_cost(*g, sol);
    add(std::move(sol), value);
  }
  OracleVerdict finish() {
    v.holds = !v.witness;
    if (!v.holds) v.common_value.reset();
    return std::move(v);
  }
};

}  // namespace

OracleVerdict brute_force_oracle_tsp(const CostTensor& c) {
  if (c.order() != 2 || !c.is_cubic()) throw InputError("tsp needs a square matrix");
  const int n = c.extent();
  if (n < 3) throw InputError("tsp needs n >= 3");
  require_at_most(n, 8, "tsp");
  Collector col;
  std::vector<int> tour(n);
  std::iota(tour.begin(), tour.end(), 1);
  do {
    col.add(tour_edges(tour), tour_cost(c, tour));
  } while (std::next_permutation(tour.begin() + 1, tour.end()));
  return col.finish();
}

OracleVerdict brute_force_oracle(ProblemKind kind, const WeightedGraph& g) {
  validate_graph(g);
  if (kind == ProblemKind::tsp) return brute_force_oracle_tsp(tsp_matrix(g));

  Collector col;
  col.g = &g;
  const int n = g.n;

  switch (kind) {
    case ProblemKind::mst: {
      require_undirected(g, "mst");
      require_at_most(n, 7, "mst");
      if (!connected(g)) throw InputError("mst needs a connected graph");
      const std::size_t m = g.edges.size();
      const std::size_t need = static_cast<std::size_t>(n - 1);
      std::vector<std::size_t> pick;
      auto rec = [&](auto&& self, std::size_t from) -> void {
        if (pick.size() == need) {
          UnionFind uf(n);
          EdgeList tree;
          for (std::size_t e : pick) {
            if (!uf.unite(g.edges[e].u, g.edges[e].v)) return;
            tree.emplace_back(g.edges[e].u, g.edges[e].v);
          }
          col.add(std::move(tree));
          return;
        }
        for (std::size_t e = from; e + (need - pick.size()) <= m; ++e) {
          pick.push_back(e);
          self(self, e + 1);
          pick.pop_back();
        }
      };
      rec(rec, 0);
      break;
    }
    case ProblemKind::sp_undirected:
    case ProblemKind::sp_directed: {
      require_at_most(n, 8, "path");
      if (n < 2) throw InputError("path oracle needs n >= 2");
      const WeightTable w(g);
      std::vector<int> path{1};
      std::vector<char> on(n + 1, 0);
      on[1] = 1;
      auto rec = [&](auto&& self) -> void {
        const int v = path.back();
        if (v == n) {
          col.add(path_edges(path));
          return;
        }
        for (int to = 1; to <= n; ++to) {
          if (on[to] || !w.has(v, to)) continue;
          on[to] = 1;
          path.push_back(to);
          self(self);
          path.pop_back();
          on[to] = 0;
        }
      };
      rec(rec);
      break;
    }
    case ProblemKind::matching: {
      require_undirected(g, "matching");
      require_at_most(n, 8, "matching");
      const WeightTable w(g);
      const std::size_t target = max_matching_size(g);
      std::vector<char> used(n + 1, 0);
      EdgeList cur;
      auto rec = [&](auto&& self, int v) -> void {
        while (v <= n && used[v]) ++v;
        // Remaining vertices cannot lift the size to the target.
        int free = 0;
        for (int x = v; x <= n; ++x) free += used[x] ? 0 : 1;
        if (cur.size() + static_cast<std::size_t>(free / 2) < target) return;
        if (v > n) {
          col.add(cur);
          return;
        }
        used[v] = 1;
        for (int u = v + 1; u <= n; ++u) {
          if (used[u] || !w.has(v, u)) continue;
          used[u] = 1;
          cur.emplace_back(v, u);
          self(self, v + 1);
          cur.pop_back();
          used[u] = 0;
        }
        self(self, v + 1);
        used[v] = 0;
      };
      rec(rec, 1);
      break;
    }
    case ProblemKind::tsp:
      break;
  }
  return col.finish();
}

}  // namespace covpkit
