#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "covpkit/covp.hpp"
#include "covpkit/errors.hpp"
#include "covpkit/graph.hpp"
#include "covpkit/io.hpp"
#include "covpkit/reduce.hpp"
#include "covpkit/repro.hpp"

namespace py = pybind11;
using namespace covpkit;
using io::json;

namespace {

py::object fraction_type() {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls;
}

/// Python values to JSON; Fractions become "p/q" strings and large ints decimal strings.
json to_json(py::handle h) {
  if (h.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) {
    try {
      return h.cast<std::int64_t>();
    } catch (const py::cast_error&) {
      return py::str(h).cast<std::string>();
    }
  }
  if (py::isinstance(h, fraction_type())) {
    return py::str(h.attr("numerator")).cast<std::string>() + "/" +
           py::str(h.attr("denominator")).cast<std::string>();
  }
  if (py::isinstance<py::float_>(h)) throw InputError("floats are not accepted; use int, str or fractions.Fraction");
  if (py::isinstance<py::str>(h)) return h.cast<std::string>();
  if (py::isinstance<py::dict>(h)) {
    json out = json::object();
    for (auto [k, v] : h.cast<py::dict>()) out[py::str(k).cast<std::string>()] = to_json(v);
    return out;
  }
  if (py::isinstance<py::sequence>(h)) {
    json out = json::array();
    for (auto v : h.cast<py::sequence>()) out.push_back(to_json(v));
    return out;
  }
  throw InputError("unsupported value of type " + py::str(py::type::of(h)).cast<std::string>());
}

bool looks_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == s.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (i == slash || (i == 0 && c == '-')) continue;
    if (c < '0' || c > '9') return false;
  }
  return true;
}

/// JSON to Python; "p/q" strings become Fractions, integers stay ints.
py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string: {
      const auto& s = j.get_ref<const std::string&>();
      if (looks_rational(s)) return fraction_type()(py::str(s));
      return py::str(s);
    }
    case json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return std::move(out);
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return std::move(out);
    }
    default:
      return py::none();
  }
}

CostTensor tensor(const py::object& dims, const py::object& data) {
  return io::tensor_from_json(json{{"dims", to_json(dims)}, {"data", to_json(data)}});
}

SearchBudget budget(std::optional<std::uint64_t> max_nodes, std::optional<std::uint64_t> max_solutions) {
  SearchBudget b = SearchBudget::from_env();
  if (max_nodes) b.max_nodes = *max_nodes;
  if (max_solutions) b.max_solutions = *max_solutions;
  return b;
}

}  // namespace

PYBIND11_MODULE(_covpkit, m) {
  m.doc() = "Exact COVP and sum-decomposability toolkit";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_AssertionError);

  m.def(
      "decompose",
      [](const py::object& dims, const py::object& data, int s) {
        return to_py(io::to_json(decompose(tensor(dims, data), s)));
      },
      py::arg("dims"), py::arg("data"), py::arg("s"));

  m.def("savs_dimension", &savs_dimension, py::arg("d"), py::arg("s"), py::arg("n"));

  m.def(
      "covp_space_dimension",
      [](int d, int s, int n, std::optional<std::uint64_t> max_nodes, std::optional<std::uint64_t> max_solutions) {
        return covp_space_dimension(d, s, n, budget(max_nodes, max_solutions));
      },
      py::arg("d"), py::arg("s"), py::arg("n"), py::arg("max_nodes") = py::none(),
      py::arg("max_solutions") = py::none());

  m.def(
      "enumerate_solutions",
      [](int d, int s, int n, std::optional<std::uint64_t> max_nodes, std::optional<std::uint64_t> max_solutions) {
        json sols = json::array();
        const auto st = stream_general(d, s, n, budget(max_nodes, max_solutions), [&](const FeasibleSolution& f) {
          sols.push_back(io::to_json(f));
          return true;
        });
        return to_py(json{{"solutions", std::move(sols)}, {"complete", st.complete}, {"nodes", st.nodes}});
      },
      py::arg("d"), py::arg("s"), py::arg("n"), py::arg("max_nodes") = py::none(),
      py::arg("max_solutions") = py::none());

  m.def(
      "covp_check",
      [](const py::object& dims, const py::object& data, int s, const std::string& method, unsigned workers) {
        const CostTensor c = tensor(dims, data);
        const int d = c.order();
        std::string chosen = method;
        if (chosen == "auto") chosen = (s == 1 && c.extent() >= 2) ? "axial" : (s == d - 1 && c.extent() >= 2) ? "p2" : "brute";
        CovpVerdict v;
        if (chosen == "axial")
          v = covp_check_axial_fast(c);
        else if (chosen == "p2")
          v = covp_check_planar_p2(c);
        else if (chosen == "brute")
          v = covp_check_bruteforce(c, s, SearchBudget::from_env(), workers);
        else
          throw InputError("method must be auto, brute, p2 or axial");
        return to_py(io::to_json(v));
      },
      py::arg("dims"), py::arg("data"), py::arg("s"), py::arg("method") = "auto", py::arg("workers") = 1U);

  m.def("counterexample_array", [] { return to_py(io::to_json(counterexample_array())); });

  m.def(
      "axial_reduction",
      [](const py::object& dims, const py::object& data) {
        const auto r = axial_reduction(tensor(dims, data));
        return to_py(json{{"z", io::to_json(r.transformation.index_z)},
                          {"passes", r.passes},
                          {"reduced", io::to_json(r.reduced)},
                          {"vectors", io::to_json(r.vectors)}});
      },
      py::arg("dims"), py::arg("data"));

  m.def(
      "tp_covp",
      [](const py::object& dims, const py::object& costs, const py::object& supplies) {
        const auto inst =
            io::transport_from_json(json{{"dims", to_json(dims)}, {"costs", to_json(costs)}, {"supplies", to_json(supplies)}});
        return to_py(io::to_json(covp_check_axial_tp(inst)));
      },
      py::arg("dims"), py::arg("costs"), py::arg("supplies"));

  m.def(
      "blow_up",
      [](const py::object& dims, const py::object& costs, const py::object& supplies) {
        const auto inst =
            io::transport_from_json(json{{"dims", to_json(dims)}, {"costs", to_json(costs)}, {"supplies", to_json(supplies)}});
        return to_py(io::to_json(blow_up(inst)));
      },
      py::arg("dims"), py::arg("costs"), py::arg("supplies"));

  m.def(
      "graph_covp",
      [](const std::string& kind, int n, const py::object& edges, bool directed, bool oracle) {
        const ProblemKind k = parse_problem_kind(kind);
        const WeightedGraph g = io::graph_from_json(json{{"n", n}, {"directed", directed}, {"edges", to_json(edges)}});
        GraphVerdict v;
        switch (k) {
          case ProblemKind::mst:
            v = mst_covp(g);
            break;
          case ProblemKind::sp_undirected:
            v = sp_undirected_covp(g);
            break;
          case ProblemKind::sp_directed:
            v = sp_directed_covp(g);
            break;
          case ProblemKind::matching:
            v = matching_covp(g);
            break;
          case ProblemKind::tsp:
            v = tsp_covp(tsp_matrix(g));
            break;
        }
        json out = io::to_json(v);
        if (oracle) out["oracle"] = io::to_json(brute_force_oracle(k, g));
        return to_py(out);
      },
      py::arg("kind"), py::arg("n"), py::arg("edges"), py::arg("directed") = false, py::arg("oracle") = false);

  m.def(
      "repro",
      [](const std::string& scenario) { return to_py(run_repro(scenario).to_json(false)); }, py::arg("scenario"));
}
