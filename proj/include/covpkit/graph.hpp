#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covpkit/rational.hpp"
#include "covpkit/tensor.hpp"

namespace covpkit {

struct Edge {
  int u = 0;
  int v = 0;
  Rational w;
};

/// Vertices 1..n. Undirected edges are normalised to u < v.
struct WeightedGraph {
  int n = 0;
  bool directed = false;
  std::vector<Edge> edges;
};

/// Throws InputError on self-loops, out-of-range endpoints or repeated edges.
void validate_graph(const WeightedGraph& g);

/// Complete undirected graph from a symmetric rule w(i, j), i < j.
[[nodiscard]] WeightedGraph complete_graph(int n, const std::vector<std::vector<Rational>>& w, bool directed = false);

enum class ProblemKind { mst, sp_undirected, sp_directed, matching, tsp };

[[nodiscard]] const char* to_string(ProblemKind k) noexcept;
/// Accepts mst, sp-undir, sp-dir, matching, tsp.
[[nodiscard]] ProblemKind parse_problem_kind(const std::string& name);

enum class CertificateKind { mst_alphas, sp_undirected_ab, sp_directed_potential, matching_potential, matching_uniform, tsp_sum_matrix };

[[nodiscard]] const char* to_string(CertificateKind k) noexcept;

struct GraphCertificate {
  CertificateKind kind = CertificateKind::mst_alphas;
  /// mst: one alpha per component; sp-undir: (a, b); sp-dir and matching: a_1..a_n;
  /// uniform matching: the common weight; tsp: u_1..u_n followed by v_1..v_n.
  std::vector<Rational> parameters;
  /// mst only: edge indices (into G.edges) of each cycle-graph component.
  std::vector<std::vector<std::size_t>> components;
};

/// Solutions are edge lists: (u, v) pairs, in traversal order for paths and tours.
using EdgeList = std::vector<std::pair<int, int>>;

struct GraphWitness {
  EdgeList first;
  EdgeList second;
  Rational first_value;
  Rational second_value;
};

struct GraphVerdict {
  bool holds = false;
  std::optional<Rational> common_value;
  std::optional<GraphCertificate> certificate;
  std::optional<GraphWitness> witness;
  std::string note;
};

/// Edge indices grouped by cycle-graph component: the edge sets of the
/// biconnected components, so every bridge is its own component. Sorted by
/// smallest member.
[[nodiscard]] std::vector<std::vector<std::size_t>> cycle_graph_components(const WeightedGraph& g);

[[nodiscard]] GraphVerdict mst_covp(const WeightedGraph& g);
[[nodiscard]] GraphVerdict sp_undirected_covp(const WeightedGraph& g);
[[nodiscard]] GraphVerdict sp_directed_covp(const WeightedGraph& g);
[[nodiscard]] GraphVerdict matching_covp(const WeightedGraph& g);
/// Asymmetric costs; tours are directed Hamiltonian cycles and the diagonal is ignored.
[[nodiscard]] GraphVerdict tsp_covp(const CostTensor& c);

/// n x n cost matrix of a complete graph (symmetric when undirected); diagonal zero.
[[nodiscard]] CostTensor tsp_matrix(const WeightedGraph& g);

struct OracleVerdict {
  bool holds = false;
  std::size_t solutions = 0;
  std::optional<Rational> common_value;
  std::optional<GraphWitness> witness;
};

/// Exhaustive enumeration of the feasible set. Size bounds: spanning trees
/// n <= 7, paths, matchings and tours n <= 8.
[[nodiscard]] OracleVerdict brute_force_oracle(ProblemKind kind, const WeightedGraph& g);
[[nodiscard]] OracleVerdict brute_force_oracle_tsp(const CostTensor& c);

/// Objective of an edge list against G (each edge looked up by its endpoints).
[[nodiscard]] Rational edge_list_cost(const WeightedGraph& g, const EdgeList& edges);

/// Feasibility of an edge list for the problem on G.
[[nodiscard]] bool is_feasible_for(ProblemKind kind, const WeightedGraph& g, const EdgeList& edges);

}  // namespace covpkit
