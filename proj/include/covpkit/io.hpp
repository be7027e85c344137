#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "covpkit/covp.hpp"
#include "covpkit/graph.hpp"
#include "covpkit/reduce.hpp"

namespace covpkit::io {

using nlohmann::json;

/// Strict JSON: decimal and exponent literals, NaN-like tokens and trailing
/// garbage are rejected with InputError naming the byte offset.
[[nodiscard]] json parse_strict(std::string_view text);
[[nodiscard]] json read_file(const std::string& path);

/// Integer literal or "p/q" string.
[[nodiscard]] Rational rational_from_json(const json& j);
/// Integers that fit in 64 bits as numbers, everything else as "p/q" strings.
[[nodiscard]] json to_json(const Rational& r);

/// {"dims":[...], "data":[...]} in row-major order.
[[nodiscard]] CostTensor tensor_from_json(const json& j);
[[nodiscard]] json to_json(const CostTensor& c);

/// {"d", "s", "n" (or "dims"), "components":[{"Q":[...], "data":[...]}]}.
[[nodiscard]] Decomposition decomposition_from_json(const json& j);
[[nodiscard]] json to_json(const Decomposition& D);

/// A solution is its list of tuples.
[[nodiscard]] FeasibleSolution solution_from_json(const json& j, int s, int n);
[[nodiscard]] json to_json(const FeasibleSolution& f);

/// {"dims":[...], "costs":[...], "supplies":[[...], ...]}.
[[nodiscard]] TransportInstance transport_from_json(const json& j);
[[nodiscard]] json to_json(const TransportInstance& inst);
[[nodiscard]] json to_json(const TransportPlan& plan);

/// {"n":..., "directed":bool, "edges":[[u, v, w], ...]}; undirected edges are normalised to u < v.
[[nodiscard]] WeightedGraph graph_from_json(const json& j);
[[nodiscard]] json to_json(const WeightedGraph& g);

[[nodiscard]] json to_json(const CovpVerdict& v);
[[nodiscard]] json to_json(const DecomposeResult& r);
[[nodiscard]] json to_json(const TransportVerdict& v);
[[nodiscard]] json to_json(const GraphVerdict& v);
[[nodiscard]] json to_json(const OracleVerdict& v);
[[nodiscard]] json to_json(const OptimalityVerdict& v);

}  // namespace covpkit::io
