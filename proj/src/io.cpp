#include "covpkit/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "covpkit/errors.hpp"

namespace covpkit::io {

namespace {

void scan_numbers(std::string_view text) {
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (ch == '\\') ++i;
      else if (ch == '"') in_string = false;
      continue;
    }
    if (ch == '"') {
      in_string = true;
      continue;
    }
    if (ch != '-' && (ch < '0' || ch > '9')) continue;
    const std::size_t start = i;
    while (i < text.size() && std::string_view("0123456789+-.eE").find(text[i]) != std::string_view::npos) {
      if (text[i] == '.' || text[i] == 'e' || text[i] == 'E')
        throw InputError("decimal literal at byte " + std::to_string(start) +
                         "; write rationals as integers or \"p/q\" strings");
      ++i;
    }
    --i;
  }
}

void require_object(const json& j, const char* what, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    if (!j.contains(k)) throw InputError(std::string(what) + ": missing key \"" + k + "\"");
    allowed.insert(k);
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [k, _] : j.items())
    if (!allowed.contains(k)) throw InputError(std::string(what) + ": unexpected key \"" + k + "\"");
}

std::int64_t int_from_json(const json& j, const char* what) {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) throw InputError(std::string(what) + ": integer out of range");
    return static_cast<std::int64_t>(v);
  }
  if (j.is_number_integer()) return j.get<std::int64_t>();
  throw InputError(std::string(what) + ": expected an integer");
}

int small_int(const json& j, const char* what, int lo) {
  const auto v = int_from_json(j, what);
  if (v < lo || v > 1'000'000) throw InputError(std::string(what) + ": value " + std::to_string(v) + " out of range");
  return static_cast<int>(v);
}

Extents extents_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a nonempty array of extents");
  Extents dims;
  for (const auto& e : j) dims.push_back(small_int(e, what, 1));
  return dims;
}

std::vector<Rational> rationals_from_json(const json& j, std::size_t expected, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  if (j.size() != expected)
    throw InputError(std::string(what) + ": expected " + std::to_string(expected) + " entries, got " +
                     std::to_string(j.size()));
  std::vector<Rational> out;
  out.reserve(expected);
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

json rationals_to_json(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_json(v));
  return out;
}

json edge_list_to_json(const EdgeList& edges) {
  json out = json::array();
  for (const auto& [u, v] : edges) out.push_back({u, v});
  return out;
}

json graph_witness_to_json(const GraphWitness& w) {
  return {{"first", edge_list_to_json(w.first)},
          {"second", edge_list_to_json(w.second)},
          {"first_value", to_json(w.first_value)},
          {"second_value", to_json(w.second_value)}};
}

}  // namespace

json parse_strict(std::string_view text) {
  scan_numbers(text);
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_strict(buf.str());
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer() || j.is_number_unsigned()) return Rational(int_from_json(j, "rational"));
  if (j.is_number_float()) throw InputError("integer literal outside the 64-bit range; write it as a string");
  throw InputError("expected an integer or a \"p/q\" string, got " + std::string(j.type_name()));
}

json to_json(const Rational& r) {
  const std::string s = r.str();
  if (r.is_integer()) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  }
  return s;
}

CostTensor tensor_from_json(const json& j) {
  require_object(j, "tensor", {"dims", "data"});
  Extents dims = extents_from_json(j.at("dims"), "tensor dims");
  std::size_t count = 1;
  for (int e : dims) {
    if (count > (std::size_t{1} << 32) / static_cast<std::size_t>(e)) throw InputError("tensor too large");
    count *= static_cast<std::size_t>(e);
  }
  return CostTensor(std::move(dims), rationals_from_json(j.at("data"), count, "tensor data"));
}

json to_json(const CostTensor& c) { return {{"dims", c.dims()}, {"data", rationals_to_json(c.data())}}; }

Decomposition decomposition_from_json(const json& j) {
  require_object(j, "decomposition", {"d", "s", "components"}, {"n", "dims"});
  Decomposition D;
  D.d = small_int(j.at("d"), "decomposition d", 1);
  D.s = small_int(j.at("s"), "decomposition s", 0);
  if (j.contains("dims") == j.contains("n")) throw InputError("decomposition: give exactly one of \"n\" and \"dims\"");
  if (j.contains("n"))
    D.dims.assign(static_cast<std::size_t>(D.d), small_int(j.at("n"), "decomposition n", 1));
  else
    D.dims = extents_from_json(j.at("dims"), "decomposition dims");
  if (static_cast<int>(D.dims.size()) != D.d) throw InputError("decomposition: dims length differs from d");
  if (!j.at("components").is_array()) throw InputError("decomposition: components must be an array");
  for (const auto& comp : j.at("components")) {
    require_object(comp, "component", {"Q", "data"});
    Component c;
    if (!comp.at("Q").is_array()) throw InputError("component Q must be an array");
    for (const auto& q : comp.at("Q")) c.q.push_back(small_int(q, "component Q", 1));
    validate_subset(c.q, D.d);
    Extents sub;
    std::size_t count = 1;
    for (int q : c.q) {
      sub.push_back(D.dims[static_cast<std::size_t>(q - 1)]);
      count *= static_cast<std::size_t>(sub.back());
    }
    c.values = CostTensor(std::move(sub), rationals_from_json(comp.at("data"), count, "component data"));
    D.components.push_back(std::move(c));
  }
  validate_decomposition(D);
  return D;
}

json to_json(const Decomposition& D) {
  json out{{"d", D.d}, {"s", D.s}};
  bool cubic = std::all_of(D.dims.begin(), D.dims.end(), [&](int e) { return e == D.dims.front(); });
  if (cubic && !D.dims.empty())
    out["n"] = D.dims.front();
  else
    out["dims"] = D.dims;
  json comps = json::array();
  for (const auto& c : D.components) comps.push_back({{"Q", c.q}, {"data", rationals_to_json(c.values.data())}});
  out["components"] = std::move(comps);
  return out;
}

FeasibleSolution solution_from_json(const json& j, int s, int n) {
  if (!j.is_array() || j.empty()) throw InputError("solution: expected a nonempty list of tuples");
  std::vector<IndexTuple> tuples;
  std::size_t d = 0;
  for (const auto& t : j) {
    if (!t.is_array() || t.empty()) throw InputError("solution: each tuple must be a nonempty array");
    if (d == 0) d = t.size();
    if (t.size() != d) throw InputError("solution: tuples of different lengths");
    IndexTuple tuple;
    for (const auto& x : t) {
      const int v = small_int(x, "solution index", 1);
      if (v > n) throw InputError("solution index " + std::to_string(v) + " exceeds n = " + std::to_string(n));
      tuple.push_back(v);
    }
    tuples.push_back(std::move(tuple));
  }
  return FeasibleSolution(static_cast<int>(d), s, n, std::move(tuples));
}

json to_json(const FeasibleSolution& f) {
  json out = json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto t = f.tuple(i);
    out.push_back(std::vector<int>(t.begin(), t.end()));
  }
  return out;
}

TransportInstance transport_from_json(const json& j) {
  require_object(j, "transport instance", {"dims", "costs", "supplies"});
  TransportInstance inst;
  inst.costs = tensor_from_json(json{{"dims", j.at("dims")}, {"data", j.at("costs")}});
  const auto& sup = j.at("supplies");
  if (!sup.is_array()) throw InputError("supplies must be an array of arrays");
  for (const auto& axis : sup) {
    if (!axis.is_array()) throw InputError("supplies must be an array of arrays");
    std::vector<std::int64_t> row;
    for (const auto& b : axis) row.push_back(int_from_json(b, "supply"));
    inst.supplies.push_back(std::move(row));
  }
  validate_transport(inst);
  return inst;
}

json to_json(const TransportInstance& inst) {
  return {{"dims", inst.costs.dims()}, {"costs", rationals_to_json(inst.costs.data())}, {"supplies", inst.supplies}};
}

json to_json(const TransportPlan& plan) { return {{"dims", plan.dims}, {"flow", plan.flow}}; }

WeightedGraph graph_from_json(const json& j) {
  require_object(j, "graph", {"n", "edges"}, {"directed"});
  WeightedGraph g;
  g.n = small_int(j.at("n"), "graph n", 1);
  if (j.contains("directed")) {
    if (!j.at("directed").is_boolean()) throw InputError("graph: directed must be a boolean");
    g.directed = j.at("directed").get<bool>();
  }
  if (!j.at("edges").is_array()) throw InputError("graph: edges must be an array");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw InputError("graph: each edge is [u, v, w]");
    Edge edge{small_int(e[0], "edge endpoint", 1), small_int(e[1], "edge endpoint", 1), rational_from_json(e[2])};
    if (!g.directed && edge.u > edge.v) std::swap(edge.u, edge.v);
    g.edges.push_back(std::move(edge));
  }
  validate_graph(g);
  return g;
}

json to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.u, e.v, to_json(e.w)});
  return {{"n", g.n}, {"directed", g.directed}, {"edges", std::move(edges)}};
}

json to_json(const CovpVerdict& v) {
  json out{{"status", to_string(v.status)},
           {"provisional", v.provisional},
           {"solutions_checked", v.solutions_checked}};
  if (v.common_value) out["common_value"] = to_json(*v.common_value);
  if (v.witness) {
    out["witness"] = {{"first", to_json(v.witness->first)},
                      {"second", to_json(v.witness->second)},
                      {"first_value", to_json(v.witness->first_value)},
                      {"second_value", to_json(v.witness->second_value)}};
  }
  if (v.violation) out["violation"] = *v.violation;
  if (v.sum_decomposable) out["sum_decomposable"] = *v.sum_decomposable;
  if (v.decomposition) out["decomposition"] = to_json(*v.decomposition);
  return out;
}

json to_json(const DecomposeResult& r) {
  json out{{"decomposable", r.decomposable()}};
  if (r.decomposition)
    out["decomposition"] = to_json(*r.decomposition);
  else
    out["certificate"] = rationals_to_json(r.certificate);
  return out;
}

json to_json(const TransportVerdict& v) {
  json out{{"status", to_string(v.status)}, {"sum_decomposable", v.sum_decomposable}, {"active", v.active}};
  if (v.common_value) out["common_value"] = to_json(*v.common_value);
  if (v.decomposition) out["decomposition"] = to_json(*v.decomposition);
  if (!v.certificate.empty()) out["certificate"] = rationals_to_json(v.certificate);
  if (v.witness) out["witness"] = {{"first", to_json(v.witness->first)}, {"second", to_json(v.witness->second)}};
  if (v.witness_values)
    out["witness_values"] = {to_json(v.witness_values->first), to_json(v.witness_values->second)};
  return out;
}

json to_json(const GraphVerdict& v) {
  json out{{"holds", v.holds}};
  if (v.common_value) out["common_value"] = to_json(*v.common_value);
  if (v.certificate) {
    json cert{{"kind", to_string(v.certificate->kind)}, {"parameters", rationals_to_json(v.certificate->parameters)}};
    if (!v.certificate->components.empty()) cert["components"] = v.certificate->components;
    out["certificate"] = std::move(cert);
  }
  if (v.witness) out["witness"] = graph_witness_to_json(*v.witness);
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

json to_json(const OracleVerdict& v) {
  json out{{"holds", v.holds}, {"solutions", v.solutions}};
  if (v.common_value) out["common_value"] = to_json(*v.common_value);
  if (v.witness) out["witness"] = graph_witness_to_json(*v.witness);
  return out;
}

json to_json(const OptimalityVerdict& v) {
  json out{{"optimal", v.optimal}, {"reduced_objective", to_json(v.reduced_objective)}};
  if (v.optimal) out["value"] = to_json(v.value);
  switch (v.violated) {
    case OptimalityCondition::none:
      break;
    case OptimalityCondition::nonnegativity:
      out["violated"] = "nonnegativity";
      break;
    case OptimalityCondition::zero_objective:
      out["violated"] = "zero_objective";
      break;
  }
  if (v.negative_entry) out["negative_entry"] = *v.negative_entry;
  return out;
}

}  // namespace covpkit::io
