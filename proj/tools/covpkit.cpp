// covpkit command-line front end. Prints JSON on stdout; exit codes:
// 0 verdict computed, 1 input error, 2 budget exhausted, 3 internal error.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "covpkit/covp.hpp"
#include "covpkit/errors.hpp"
#include "covpkit/graph.hpp"
#include "covpkit/io.hpp"
#include "covpkit/reduce.hpp"
#include "covpkit/repro.hpp"

namespace {

using namespace covpkit;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInternal = 3;

struct Globals {
  bool pretty = false;
  unsigned workers = 1;
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::uint64_t> max_solutions;

  [[nodiscard]] SearchBudget budget() const {
    SearchBudget b = SearchBudget::from_env();
    if (max_nodes) b.max_nodes = *max_nodes;
    if (max_solutions) b.max_solutions = *max_solutions;
    return b;
  }
};

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << j.dump() << "\n";
  }
}

void render_repro(const json& report, std::ostream& out) {
  out << "scenario " << report.at("scenario").get<std::string>() << "\n";
  for (const auto& c : report.at("claims")) {
    std::string status = c.at("status").get<std::string>();
    status.resize(12, ' ');
    out << "  " << status << c.at("claim").get<std::string>() << "  [" << c.at("citation").get<std::string>()
        << "]\n";
    if (c.at("status") != "pass") {
      out << "      expected " << c.at("expected").dump() << "\n";
      out << "      computed " << c.at("computed").dump() << "\n";
    }
  }
  out << (report.at("passed").get<bool>() ? "all claims hold\n" : "some claims did not hold\n");
}

void emit(const Globals& g, const json& j) {
  if (!g.pretty) {
    std::cout << j.dump() << "\n";
  } else if (j.is_object() && j.contains("claims") && j.contains("scenario")) {
    render_repro(j, std::cout);
  } else {
    flatten(j, "", std::cout);
  }
}

CovpVerdict run_check(const CostTensor& c, int s, const std::string& method, const Globals& g) {
  const int d = c.order();
  if (s <= 0 || s >= d) throw InputError("need 0 < s < d");
  std::string m = method;
  if (m == "auto") m = (s == 1 && c.extent() >= 2) ? "axial" : (s == d - 1 && c.extent() >= 2) ? "p2" : "brute";
  if (m == "axial") {
    if (s != 1) throw InputError("--method axial needs s = 1");
    return covp_check_axial_fast(c);
  }
  if (m == "p2") {
    if (s != d - 1) throw InputError("--method p2 needs s = d - 1");
    return covp_check_planar_p2(c);
  }
  return covp_check_bruteforce(c, s, g.budget(), g.workers);
}

int run(int argc, char** argv) {
  CLI::App app{"Constant objective value property toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--pretty", g.pretty, "Human-readable view of the JSON output");
  app.add_option("--workers", g.workers, "Threads for brute-force objective evaluation")->check(CLI::Range(1U, 256U));
  app.add_option("--max-nodes", g.max_nodes, "Search node budget (default 200000000 or COVPKIT_MAX_NODES)");
  app.add_option("--max-solutions", g.max_solutions, "Cap on enumerated solutions (default 300000)");

  int exit_code = kExitOk;

  // decompose
  std::string file;
  int s = 0;
  auto* dec = app.add_subcommand("decompose", "Decide sum-decomposability of a tensor");
  dec->add_option("--file", file, "Tensor JSON")->required();
  dec->add_option("--s", s, "Subset size")->required();
  dec->callback([&] {
    const auto c = io::tensor_from_json(io::read_file(file));
    emit(g, io::to_json(decompose(c, s)));
  });

  // dim
  int d = 0, n = 0;
  auto* dim = app.add_subcommand("dim", "Dimension of SAVS(d,s,n)");
  dim->add_option("--d", d)->required();
  dim->add_option("--s", s)->required();
  dim->add_option("--n", n)->required();
  dim->callback([&] { emit(g, {{"d", d}, {"s", s}, {"n", n}, {"savs_dim", savs_dimension(d, s, n)}}); });

  // enumerate
  bool list = false;
  auto* en = app.add_subcommand("enumerate", "Enumerate feasible solutions of the (d,s)-AP");
  en->add_option("--d", d)->required();
  en->add_option("--s", s)->required();
  en->add_option("--n", n)->required();
  en->add_flag("--solutions", list, "Print the solutions too");
  en->callback([&] {
    json sols = json::array();
    const auto st = stream_general(d, s, n, g.budget(), [&](const FeasibleSolution& f) {
      if (list) sols.push_back(io::to_json(f));
      return true;
    });
    json out{{"d", d}, {"s", s}, {"n", n}, {"count", st.emitted}, {"complete", st.complete}, {"nodes", st.nodes}};
    if (list) out["solutions"] = std::move(sols);
    emit(g, out);
    if (!st.complete) exit_code = kExitBudget;
  });

  // covp
  auto* covp = app.add_subcommand("covp", "COVP checks, dimensions and reproduction scenarios");
  covp->require_subcommand(1);
  std::string method = "auto";
  auto* check = covp->add_subcommand("check", "Decide the COVP of a cost tensor");
  check->add_option("--file", file, "Tensor JSON")->required();
  check->add_option("--s", s)->required();
  check->add_option("--method", method)->check(CLI::IsMember({"auto", "brute", "p2", "axial"}));
  check->callback([&] {
    const auto c = io::tensor_from_json(io::read_file(file));
    const auto v = run_check(c, s, method, g);
    emit(g, io::to_json(v));
    if (v.provisional && !v.witness) exit_code = kExitBudget;
  });
  auto* cdim = covp->add_subcommand("dim", "Dimension of the COVP space against SAVS");
  cdim->add_option("--d", d)->required();
  cdim->add_option("--s", s)->required();
  cdim->add_option("--n", n)->required();
  cdim->callback([&] {
    const auto r = conjecture_experiment(d, s, n, g.budget());
    if (!r.complete) throw BudgetExhausted("enumeration incomplete; raise --max-nodes/--max-solutions");
    emit(g, {{"d", d}, {"s", s}, {"n", n}, {"covp_dim", r.covp_dim}, {"savs_dim", r.savs_dim}, {"equal", r.equal()}});
  });
  std::string scenario;
  bool timing = false;
  auto* repro = covp->add_subcommand("repro", "Regenerate the reported numbers");
  repro->add_option("scenario", scenario)->required()->check(CLI::IsMember(repro_scenarios()));
  repro->add_flag("--timing", timing, "Include wall-clock seconds per claim");
  repro->callback([&] {
    const auto report = run_repro(scenario, g.budget());
    emit(g, report.to_json(timing));
    for (const auto& c : report.claims)
      if (c.status == ClaimStatus::inconclusive) exit_code = kExitBudget;
  });

  // reduce
  auto* red = app.add_subcommand("reduce", "Admissible transformations");
  red->require_subcommand(1);
  auto* axial = red->add_subcommand("axial", "Iterated slice-minimum reduction");
  axial->add_option("--file", file, "Tensor JSON")->required();
  axial->callback([&] {
    const auto r = axial_reduction(io::tensor_from_json(io::read_file(file)));
    emit(g, {{"z", io::to_json(r.transformation.index_z)},
             {"passes", r.passes},
             {"reduced", io::to_json(r.reduced)},
             {"subtrahend", io::to_json(r.transformation.subtrahend)},
             {"vectors", io::to_json(r.vectors)}});
  });
  std::string subtrahend;
  auto* apply = red->add_subcommand("apply", "Subtract a COVP array");
  apply->add_option("--file", file, "Cost tensor JSON")->required();
  apply->add_option("--subtrahend", subtrahend, "COVP tensor JSON")->required();
  apply->add_option("--s", s)->required();
  apply->callback([&] {
    const auto c = io::tensor_from_json(io::read_file(file));
    const auto b = io::tensor_from_json(io::read_file(subtrahend));
    const auto r = apply_transformation(c, b, s, g.budget());
    json out{{"admissible", r.admissible}};
    if (r.admissible) {
      out["z"] = io::to_json(r.z);
      out["reduced"] = io::to_json(r.reduced);
    } else if (r.refusal) {
      out["refusal"] = {{"first", io::to_json(r.refusal->first)},
                        {"second", io::to_json(r.refusal->second)},
                        {"first_value", io::to_json(r.refusal->first_value)},
                        {"second_value", io::to_json(r.refusal->second_value)}};
    }
    emit(g, out);
  });
  std::string solution, zstr;
  auto* cert = red->add_subcommand("certify", "Optimality certificate for a solution");
  cert->add_option("--file", file, "Reduced tensor JSON")->required();
  cert->add_option("--solution", solution, "Solution JSON (list of tuples)")->required();
  cert->add_option("--s", s)->required();
  cert->add_option("--z", zstr, "Index of the transformation")->required();
  cert->callback([&] {
    const auto c = io::tensor_from_json(io::read_file(file));
    const auto f = io::solution_from_json(io::read_file(solution), s, c.extent());
    emit(g, io::to_json(certify_optimal(c, f, Rational::parse(zstr))));
  });

  // tp
  auto* tp = app.add_subcommand("tp", "Axial transportation problems");
  tp->require_subcommand(1);
  auto* tpc = tp->add_subcommand("covp", "Decide the COVP over integral transport plans");
  tpc->add_option("--file", file, "Transport instance JSON")->required();
  tpc->callback([&] { emit(g, io::to_json(covp_check_axial_tp(io::transport_from_json(io::read_file(file))))); });
  auto* blow = tp->add_subcommand("blowup", "Replace each facility by unit-supply copies");
  blow->add_option("--file", file, "Transport instance JSON")->required();
  blow->callback([&] { emit(g, io::to_json(blow_up(io::transport_from_json(io::read_file(file))))); });

  // graph
  auto* graph = app.add_subcommand("graph", "Combinatorial problems on graphs");
  graph->require_subcommand(1);
  std::string kind;
  bool oracle = false;
  auto* gc = graph->add_subcommand("covp", "Characterize the COVP of a graph problem");
  gc->add_option("--kind", kind)->required()->check(CLI::IsMember({"mst", "sp-undir", "sp-dir", "matching", "tsp"}));
  gc->add_option("--file", file, "Graph JSON (or tensor JSON for tsp)")->required();
  gc->add_flag("--oracle", oracle, "Cross-check against exhaustive enumeration");
  gc->callback([&] {
    const json input = io::read_file(file);
    const ProblemKind k = parse_problem_kind(kind);
    GraphVerdict v;
    std::optional<OracleVerdict> o;
    if (k == ProblemKind::tsp) {
      const CostTensor c = input.contains("dims") ? io::tensor_from_json(input) : tsp_matrix(io::graph_from_json(input));
      v = tsp_covp(c);
      if (oracle) o = brute_force_oracle_tsp(c);
    } else {
      const WeightedGraph wg = io::graph_from_json(input);
      switch (k) {
        case ProblemKind::mst:
          v = mst_covp(wg);
          break;
        case ProblemKind::sp_undirected:
          v = sp_undirected_covp(wg);
          break;
        case ProblemKind::sp_directed:
          v = sp_directed_covp(wg);
          break;
        default:
          v = matching_covp(wg);
          break;
      }
      if (oracle) o = brute_force_oracle(k, wg);
    }
    json out = io::to_json(v);
    out["kind"] = kind;
    if (o) {
      out["oracle"] = io::to_json(*o);
      out["oracle_agrees"] = o->holds == v.holds;
      if (o->holds != v.holds) throw InternalError("characterizer and oracle disagree");
    }
    emit(g, out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const covpkit::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const covpkit::BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const covpkit::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
