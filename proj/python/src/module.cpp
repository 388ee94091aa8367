#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "steerlab/cli.hpp"
#include "steerlab/collision.hpp"
#include "steerlab/errors.hpp"

namespace py = pybind11;
using namespace steerlab;
using nlohmann::json;

// Structured values cross the boundary as JSON text; the Python wrapper turns
// them into dicts.

namespace {

RunConfig config_from(const std::string& text) { return parse_run_config(json::parse(text)); }

std::string simulate_assemblage(const std::string& config) {
  const RunConfig rc = config_from(config);
  const DensityMatrix joint = evolve_joint(DensityMatrix::ground_state(1), rc.collision());
  const auto strategies = rc.strategies();
  return to_json(ideal_assemblage(joint, strategies)).dump();
}

std::string solve_steering_weight(const std::string& assemblage, const std::string& config) {
  const RunConfig rc = config_from(config);
  const Assemblage a = assemblage_from_json(json::parse(assemblage));
  const SdpSolution sol = steering_weight(a, rc.steering);
  json out = to_json(sol);
  out["certificate_passed"] = dual_certificate_check(a, sol).passed;
  return out.dump();
}

std::string exact_lower_bound(const std::string& config) {
  const RunConfig rc = config_from(config);
  const auto strategies = rc.strategies();
  return to_json(lower_bound(exact_estimates(rc.collision(), strategies), rc.lb)).dump();
}

std::string third_strategy(const std::string& config) {
  const RunConfig rc = config_from(config);
  return to_json(find_third_strategy(rc.collision(), rc.search)).dump();
}

py::tuple run(const std::string& command, std::optional<std::filesystem::path> config, std::filesystem::path out,
              std::vector<std::filesystem::path> inputs, std::optional<std::uint64_t> seed) {
  CommandLine cli;
  cli.command = command;
  cli.config = std::move(config);
  cli.out = std::move(out);
  cli.inputs = std::move(inputs);
  cli.seed = seed;
  std::ostringstream log;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = run_command(cli, log);
  }
  return py::make_tuple(code, log.str());
}

}  // namespace

PYBIND11_MODULE(_steerlab, m) {
  m.doc() = "Steering in collision models: simulation, tomography and steering-weight bounds";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<SearchError>(m, "SearchError", PyExc_RuntimeError);

  m.def("coupling", [](double total_time, int collisions) { return CollisionConfig(total_time, collisions).coupling(); },
        py::arg("total_time"), py::arg("collisions"));
  m.def("collision_unitary", &collision_unitary, py::arg("g"));
  m.def(
      "trajectory",
      [](double total_time, int collisions) {
        std::vector<std::array<double, 3>> out;
        for (const auto& r : stroboscopic_trajectory(CollisionConfig(total_time, collisions))) {
          out.push_back({r.r.x(), r.r.y(), r.r.z()});
        }
        return out;
      },
      py::arg("total_time"), py::arg("collisions"));
  m.def("resolve_config", [](const std::string& c) { return to_json(config_from(c)).dump(); }, py::arg("config"));
  m.def("ideal_assemblage", &simulate_assemblage, py::arg("config"));
  m.def("steering_weight", &solve_steering_weight, py::arg("assemblage"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("lower_bound", &exact_lower_bound, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("find_third_strategy", &third_strategy, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("run", &run, py::arg("command"), py::arg("config"), py::arg("out"), py::arg("inputs"), py::arg("seed"));
  m.attr("__version__") = STEERLAB_VERSION;
}
