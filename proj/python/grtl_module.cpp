#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grtl/cli.hpp"
#include "grtl/constructions.hpp"
#include "grtl/eulerian.hpp"
#include "grtl/graph.hpp"
#include "grtl/nn.hpp"
#include "grtl/oracles.hpp"
#include "grtl/tokenize.hpp"

namespace py = pybind11;
using namespace grtl;

namespace {

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

py::array_t<long long> int_matrix_to_numpy(const IntMatrix& m) {
  py::array_t<long long> out({m.n, m.n});
  auto view = out.mutable_unchecked<2>();
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) view(i, j) = m.at(i, j);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "transformer constructions for graph reasoning, with oracle certification";
  ensure_builtin_maps();

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int n, bool directed, std::vector<std::pair<int, int>> edges,
                       bool loops) { return graph_from_edges(n, directed, std::move(edges), loops); }),
           py::arg("n"), py::arg("directed"), py::arg("edges"), py::arg("loops") = false)
      .def_readonly("n", &Graph::n)
      .def_readonly("directed", &Graph::directed)
      .def_readonly("loops", &Graph::loops)
      .def_readonly("edges", &Graph::edges)
      .def("has_edge", &Graph::has_edge)
      .def("to_json", [](const Graph& g) { return graph_to_json(g).dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return graph_from_json(parse_json(text, "Graph.from_json")); })
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.n) + ", directed=" + (g.directed ? "True" : "False") +
               ", edges=" + std::to_string(g.edges.size()) + ")";
      });

  m.def("make_cycle", &make_cycle, py::arg("k"));
  m.def("make_path", &make_path, py::arg("k"));
  m.def("make_complete", &make_complete, py::arg("k"));
  m.def("make_edge", &make_edge);
  m.def("relabel", &relabel, py::arg("graph"), py::arg("perm"));
  m.def("gen_erdos_renyi", &gen_erdos_renyi, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("gen_cycles", &gen_cycles, py::arg("n"), py::arg("parts"), py::arg("seed"));
  m.def("gen_digraph", &gen_digraph, py::arg("n"), py::arg("min_out"), py::arg("max_out"),
        py::arg("edge_target"), py::arg("mutual_pairs"), py::arg("seed"));

  m.def("oracle_connected", &oracle_connected, py::arg("graph"));
  m.def(
      "oracle_matrix_power",
      [](const Graph& g, int exponent) { return int_matrix_to_numpy(oracle_matrix_power(g, exponent)); },
      py::arg("graph"), py::arg("exponent"));
  m.def("oracle_two_cycle_indicator", &oracle_two_cycle_indicator, py::arg("graph"));
  m.def("oracle_subgraph_count", &oracle_subgraph_count, py::arg("host"), py::arg("pattern"));

  py::class_<TokenizedGraph>(m, "TokenizedGraph")
      .def_readonly("graph_id", &TokenizedGraph::graph_id)
      .def_readonly("n", &TokenizedGraph::n)
      .def_readonly("scheme", &TokenizedGraph::scheme)
      .def_readonly("tokens", &TokenizedGraph::tokens)
      .def_readonly("label", &TokenizedGraph::label);
  m.def("tokenize_adjacency", &tokenize_adjacency, py::arg("graph"), py::arg("pad_n"),
        py::arg("with_index"));
  m.def("tokenize_edgelist", &tokenize_edgelist, py::arg("graph"), py::arg("pad_n"));
  m.def("tokenize_laplacian", &tokenize_laplacian, py::arg("graph"), py::arg("m"));
  m.def("export_dataset", &export_dataset, py::arg("data"), py::arg("path"));
  m.def("import_dataset", &import_dataset, py::arg("path"));

  py::enum_<NetMode>(m, "NetMode")
      .value("exact_map", NetMode::exact_map)
      .value("explicit_net", NetMode::explicit_net);

  py::class_<TransformerSpec>(m, "TransformerSpec")
      .def_property_readonly("width", &TransformerSpec::width)
      .def_property_readonly("mlp_hidden_width", &TransformerSpec::mlp_hidden_width)
      .def_property_readonly("layer_count",
                             [](const TransformerSpec& s) { return s.layers.size(); })
      .def("to_json", [](const TransformerSpec& s) { return transformer_to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return transformer_from_json(parse_json(text, "TransformerSpec.from_json"));
      });
  m.def("transformer_forward", &transformer_forward, py::arg("spec"), py::arg("tokens"));

  m.def("build_one_vs_two", &build_one_vs_two, py::arg("n"),
        py::arg("mode") = NetMode::exact_map);
  m.def("one_vs_two_input", &one_vs_two_input, py::arg("graph"));
  m.def("run_one_vs_two", &run_one_vs_two, py::arg("spec"), py::arg("graph"));

  py::class_<PowerRun>(m, "PowerRun")
      .def_property_readonly("result",
                             [](const PowerRun& r) { return int_matrix_to_numpy(r.result); })
      .def_readonly("max_pre_round_residual", &PowerRun::max_pre_round_residual);
  m.def("build_power_transformer", &build_power_transformer, py::arg("n"), py::arg("L"),
        py::arg("eps") = 1e-6, py::arg("mode") = NetMode::exact_map);
  m.def("run_power", &run_power, py::arg("spec"), py::arg("graph"));

  py::class_<SparseRun>(m, "SparseRun")
      .def_readonly("indicator", &SparseRun::indicator)
      .def_readonly("real_mass", &SparseRun::real_mass);
  py::class_<SparseVerify>(m, "SparseVerify")
      .def_readonly("pass_", &SparseVerify::pass)
      .def_readonly("margins_ok", &SparseVerify::margins_ok)
      .def_readonly("attempts", &SparseVerify::attempts)
      .def_readonly("used_seed", &SparseVerify::used_seed)
      .def_readonly("predicted", &SparseVerify::predicted)
      .def_readonly("expected", &SparseVerify::expected);
  m.def("build_sparse_two_cycle", &build_sparse_two_cycle, py::arg("n"), py::arg("d"),
        py::arg("alpha"), py::arg("temperature"), py::arg("seed"));
  m.def("sparse_two_cycle_default_temperature", &sparse_two_cycle_default_temperature,
        py::arg("n"));
  m.def("run_sparse_two_cycle", &run_sparse_two_cycle, py::arg("spec"), py::arg("graph"));
  m.def("verify_sparse_two_cycle", &verify_sparse_two_cycle, py::arg("graph"), py::arg("d"),
        py::arg("alpha"), py::arg("temperature"), py::arg("seed"), py::arg("max_attempts") = 5);

  m.def("build_subgraph_counter", &build_subgraph_counter, py::arg("n"), py::arg("k"),
        py::arg("pattern"), py::arg("mode") = NetMode::exact_map);
  m.def("run_subgraph_count", &run_subgraph_count, py::arg("spec"), py::arg("graph"));
  m.def("run_subgraph_per_combo", &run_subgraph_per_combo, py::arg("spec"), py::arg("graph"));

  m.def(
      "verify_construction",
      [](const std::string& name, const Graph& g, const std::string& params) {
        return report_row_to_json(verify_construction(name, g, parse_json(params, "params")))
            .dump();
      },
      py::arg("name"), py::arg("graph"), py::arg("params") = std::string("{}"),
      "Build the named construction, run it on the graph, certify against the "
      "brute-force oracle; returns the report row as a JSON string.");

  py::class_<EulerianEdge>(m, "EulerianEdge")
      .def_readonly("from_", &EulerianEdge::from)
      .def_readonly("to", &EulerianEdge::to)
      .def_readonly("label", &EulerianEdge::label);
  py::class_<EulerianInstance>(m, "EulerianInstance")
      .def_readonly("n", &EulerianInstance::n)
      .def_readonly("edges", &EulerianInstance::edges)
      .def_readonly("fragments", &EulerianInstance::fragments)
      .def("to_json", [](const EulerianInstance& i) { return eulerian_to_json(i).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return eulerian_from_json(parse_json(text, "EulerianInstance.from_json"));
      });
  m.def("reduce_cycles_to_eulerian", &reduce_cycles_to_eulerian, py::arg("cycles"),
        py::arg("turnaround") = std::nullopt);
  m.def("verify_eulerian", &verify_eulerian, py::arg("instance"));
  m.def("fragment_cycle_census", &fragment_cycle_census, py::arg("instance"));

  m.def("run_command", &run_command, py::arg("args"),
        "The command-line entry point; returns the process exit code.");
}
