#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bpg/errors.hpp"
#include "bpg/gauging.hpp"
#include "bpg/models.hpp"
#include "bpg/network_io.hpp"
#include "bpg/observables.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace py = pybind11;
using namespace bpg;

namespace {

Schedule parse_schedule(const std::string& s) {
  if (s == "sequential") return Schedule::sequential;
  if (s == "synchronous") return Schedule::synchronous;
  throw InvalidSpec("schedule must be 'sequential' or 'synchronous'");
}

BpConfig make_config(double target_delta, int max_iters, const std::string& schedule, double damping, int threads) {
  BpConfig c;
  c.target_delta = target_delta;
  c.max_iters = max_iters;
  c.schedule = parse_schedule(schedule);
  c.damping = damping;
  c.threads = threads;
  c.validate();
  return c;
}

TruncationPolicy make_trunc(std::optional<long> max_rank, double cutoff) {
  TruncationPolicy t{max_rank, cutoff};
  t.validate();
  return t;
}

LocalOperator make_operator(const py::object& op) {
  if (py::isinstance<py::str>(op)) {
    const std::string name = op.cast<std::string>();
    if (name == "sz") return LocalOperator::sz();
    if (name == "sx") return LocalOperator::sx();
    throw InvalidSpec("operator name must be 'sz' or 'sx'");
  }
  return LocalOperator{op.cast<Matrix>(), "custom"};
}

std::vector<RealVector> lambdas(const VidalState& vs) { return vs.lambda; }

std::vector<long> bond_dims(const Graph& g, const std::vector<Index>& bonds) {
  std::vector<long> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) out.push_back(bonds[static_cast<std::size_t>(e)].dim);
  return out;
}

std::vector<std::pair<VertexId, VertexId>> edge_list(const Graph& g) {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

py::tuple result_tuple(GaugeResult r) { return py::make_tuple(std::move(r.state), std::move(r.report)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Belief propagation gauging of tensor network states.";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidSpec>(m, "InvalidSpec", PyExc_ValueError);
  py::register_exception<TooLarge>(m, "TooLarge", PyExc_MemoryError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<int, const std::vector<std::pair<VertexId, VertexId>>&>(), py::arg("num_vertices"),
           py::arg("edges"))
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("edges", &edge_list)
      .def("degree", &Graph::degree)
      .def("is_tree", &Graph::is_tree)
      .def("__repr__", [](const Graph& g) {
        std::ostringstream s;
        s << "Graph(num_vertices=" << g.num_vertices() << ", num_edges=" << g.num_edges() << ")";
        return s.str();
      });

  m.def("square", [](int lx, int ly, bool periodic) { return build_graph(LatticeSpec::square(lx, ly, periodic)); },
        py::arg("lx"), py::arg("ly"), py::arg("periodic") = false);
  m.def("cubic",
        [](int lx, int ly, int lz, bool periodic) { return build_graph(LatticeSpec::cubic(lx, ly, lz, periodic)); },
        py::arg("lx"), py::arg("ly"), py::arg("lz"), py::arg("periodic") = false);
  m.def("hexagonal", [](int rows, int cols) { return build_graph(LatticeSpec::hexagonal(rows, cols)); });
  m.def("random_regular",
        [](int n, int z, std::uint64_t seed) { return build_graph(LatticeSpec::random_regular(n, z, seed)); },
        py::arg("n"), py::arg("z"), py::arg("seed"));
  m.def("path", [](int n) { return build_graph(LatticeSpec::path(n)); });
  m.def("random_tree", [](int n, std::uint64_t seed) { return build_graph(LatticeSpec::random_tree(n, seed)); },
        py::arg("n"), py::arg("seed"));

  py::class_<TensorNetworkState>(m, "TensorNetworkState")
      .def_readonly("graph", &TensorNetworkState::graph)
      .def_readwrite("log_scale", &TensorNetworkState::log_scale)
      .def_property_readonly("num_vertices", &TensorNetworkState::num_vertices)
      .def_property_readonly("bond_dims",
                             [](const TensorNetworkState& t) { return bond_dims(t.graph, t.bond_index); })
      .def("state_vector", [](const TensorNetworkState& t) { return state_vector(t); });

  py::class_<VidalState>(m, "VidalState")
      .def_readonly("graph", &VidalState::graph)
      .def_readwrite("log_scale", &VidalState::log_scale)
      .def_property_readonly("num_vertices", &VidalState::num_vertices)
      .def_property_readonly("lambdas", &lambdas)
      .def_property_readonly("bond_dims", [](const VidalState& v) { return bond_dims(v.graph, v.bond_index); })
      .def("state_vector", [](const VidalState& v) { return state_vector(v); })
      .def("to_symmetric", &vidal_to_symmetric);

  py::class_<GaugeReport>(m, "GaugeReport")
      .def_readonly("iterations", &GaugeReport::iterations)
      .def_readonly("final_delta", &GaugeReport::final_delta)
      .def_readonly("deltas", &GaugeReport::deltas)
      .def_readonly("seconds", &GaugeReport::seconds)
      .def_readonly("wall_time", &GaugeReport::wall_time)
      .def_readonly("converged", &GaugeReport::converged);

  m.def("random_tns", &random_tns, py::arg("graph"), py::arg("chi"), py::arg("d") = 2, py::arg("seed") = 0);
  m.def("neel_state", &neel_state, py::arg("graph"));
  m.def("ising_sqrt_partition_state", &ising_sqrt_partition_state, py::arg("graph"), py::arg("beta"),
        py::arg("h"));
  m.def("vidal_from_plain", &vidal_from_plain);
  m.def("save_tns", &save_tns, py::arg("path"), py::arg("state"));
  m.def("load_tns", &load_tns, py::arg("path"));

  const auto gauge_doc = "Returns (VidalState, GaugeReport).";
  m.def(
      "bp_gauge",
      [](const TensorNetworkState& t, double target_delta, int max_iters, const std::string& schedule,
         double damping, int threads, std::optional<long> max_rank, double cutoff) {
        return result_tuple(bp_gauge(t, make_config(target_delta, max_iters, schedule, damping, threads),
                                     make_trunc(max_rank, cutoff)));
      },
      gauge_doc, py::arg("state"), py::arg("target_delta") = 1e-10, py::arg("max_iters") = 1000,
      py::arg("schedule") = "sequential", py::arg("damping") = 0.0, py::arg("threads") = 1,
      py::arg("max_rank") = py::none(), py::arg("cutoff") = 0.0);
  m.def(
      "eager_gauge",
      [](const TensorNetworkState& t, double target_delta, int max_iters, std::optional<long> max_rank,
         double cutoff) {
        return result_tuple(
            eager_gauge(t, make_config(target_delta, max_iters, "sequential", 0.0, 1), make_trunc(max_rank, cutoff)));
      },
      gauge_doc, py::arg("state"), py::arg("target_delta") = 1e-10, py::arg("max_iters") = 1000,
      py::arg("max_rank") = py::none(), py::arg("cutoff") = 0.0);
  m.def(
      "simple_update_gauge",
      [](const TensorNetworkState& t, double target_delta, int max_iters, std::optional<long> max_rank,
         double cutoff) {
        return result_tuple(simple_update_gauge(t, make_config(target_delta, max_iters, "sequential", 0.0, 1),
                                                make_trunc(max_rank, cutoff)));
      },
      gauge_doc, py::arg("state"), py::arg("target_delta") = 1e-10, py::arg("max_iters") = 1000,
      py::arg("max_rank") = py::none(), py::arg("cutoff") = 0.0);

  m.def("vidal_distance", &vidal_distance);
  m.def("spectrum_distance", &spectrum_distance);
  m.def("relative_amplitude_error", &relative_amplitude_error);

  m.def(
      "rank_one_expectation",
      [](const VidalState& vs, const py::object& op, VertexId v) { return rank_one_expectation(vs, make_operator(op), v); },
      py::arg("state"), py::arg("op"), py::arg("vertex"));
  m.def(
      "exact_expectation",
      [](const TensorNetworkState& t, const py::object& op, VertexId v) {
        return exact_expectation(t, make_operator(op), v);
      },
      py::arg("state"), py::arg("op"), py::arg("vertex"));

  m.def(
      "run_cli",
      [](const std::string& command, const std::vector<std::string>& assignments) {
        cli::RunConfig cfg;
        std::ostringstream out, err;
        int code = cli::kExitConfigError;
        try {
          for (const auto& a : assignments) cfg.assign(a);
          code = cli::run_command(command, cfg, out, err);
        } catch (const cli::ConfigError& e) {
          err << e.what() << '\n';
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs a bpgauge command in process; returns (exit_code, stdout, stderr).", py::arg("command"),
      py::arg("assignments") = std::vector<std::string>{});
}
