#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "tam/composite.hpp"
#include "tam/geometry.hpp"
#include "tam/linear.hpp"
#include "tam/metric.hpp"
#include "tam/sampling.hpp"
#include "tam/scenarios.hpp"
#include "tam/sphere.hpp"
#include "tam/transport.hpp"

namespace py = pybind11;

namespace {

tam::RealVector to_vec(const std::vector<double>& v) {
  tam::RealVector out(static_cast<Eigen::Index>(v.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = v[static_cast<std::size_t>(i)];
  }
  return out;
}

tam::RealVector py_eval_map(const std::string& config,
                            const std::vector<double>& l) {
  return tam::eval_map(tam::map_from_json_text(config), to_vec(l));
}

tam::RealVector py_partial(const std::string& config,
                           const std::vector<double>& l, int axis, double h) {
  return tam::partial_deriv(tam::map_from_json_text(config), to_vec(l), axis, h);
}

tam::RealVector py_second(const std::string& config,
                          const std::vector<double>& l, int a, int b,
                          double h) {
  return tam::second_partial(tam::map_from_json_text(config), to_vec(l), a, b,
                             h);
}

py::dict py_groupoid(int rank, bool complex_field, std::uint64_t seed,
                     std::size_t samples) {
  tam::Sampler sampler(seed);
  tam::Field field = complex_field ? tam::Field::complex : tam::Field::real;
  tam::Matrix base = sampler.well_conditioned(rank, field);
  tam::Matrix wave = 0.12 * sampler.well_conditioned(rank, field);
  tam::FactorFamily f;
  f.fibre = tam::FibreModel{rank, field};
  f.map = tam::identity_map(tam::Box({tam::Interval{0.0, 2.0}}), "line");
  f.factor = [base, wave](const tam::RealVector& l) {
    return tam::AffineMap::pure(tam::Matrix(base + std::sin(l[0]) * wave));
  };
  tam::GroupoidReport rep =
      tam::check_groupoid(tam::from_factor_maps(f), samples, seed + 1);
  py::dict out;
  out["composition"] = rep.composition.max_residual;
  out["identity"] = rep.identity.max_residual;
  out["pass"] = rep.pass();
  return out;
}

double py_metric_roundtrip(int p, int q, std::uint64_t seed) {
  tam::RunConfig cfg;
  cfg.command = "metric-roundtrip";
  cfg.seed = seed;
  cfg.signature = {p, q};
  tam::RunResult result = tam::run_scenario(cfg);
  return result.numbers.at("max_error").get<double>();
}

double py_sphere_curvature_residual(std::uint64_t seed) {
  tam::RunConfig cfg;
  cfg.command = "curvature";
  cfg.scenario = "sphere-curvature";
  cfg.seed = seed;
  tam::RunResult result = tam::run_scenario(cfg);
  double worst = 0.0;
  for (const auto& check : result.checks) {
    worst = std::max(worst, check.max_residual);
  }
  return worst;
}

std::string py_run(const std::string& command, const std::string& scenario,
                   std::uint64_t seed, int grid, double colatitude,
                   std::pair<int, int> signature,
                   const std::map<std::string, double>& tolerances,
                   bool with_timestamp) {
  tam::RunConfig cfg;
  cfg.command = command;
  cfg.scenario = scenario;
  cfg.seed = seed;
  cfg.grid = grid;
  cfg.colatitude = colatitude;
  cfg.signature = signature;
  cfg.tolerances = tolerances;
  cfg.with_timestamp = with_timestamp;
  return tam::report_text(cfg, tam::run_scenario(cfg));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "numerical transport calculus in fibre bundles";

  m.def("eval_map", &py_eval_map, py::arg("config"), py::arg("l"),
        "Evaluate a builtin map described by a JSON config at a parameter "
        "point.");
  m.def("partial_derivative", &py_partial, py::arg("config"), py::arg("l"),
        py::arg("axis"), py::arg("h") = 0.0,
        "Partial derivative of a builtin map along one parameter axis.");
  m.def("second_partial_derivative", &py_second, py::arg("config"),
        py::arg("l"), py::arg("a"), py::arg("b"), py::arg("h") = 0.0,
        "Mixed second partial derivative of a builtin map.");
  m.def("groupoid_residuals", &py_groupoid, py::arg("rank") = 2,
        py::arg("complex_field") = false, py::arg("seed") = 1,
        py::arg("samples") = 200,
        "Composition and identity residuals of a seeded factor transport.");
  m.def("sphere_holonomy_angle", &tam::latitude_holonomy_angle,
        py::arg("colatitude"), py::arg("ode_tol") = 1e-12,
        "Rotation angle after one turn around a latitude circle of the unit "
        "sphere.");
  m.def("sphere_curvature_residual", &py_sphere_curvature_residual,
        py::arg("seed") = 1,
        "Worst residual of the round-sphere curvature/torsion checks.");
  m.def("metric_roundtrip_max_error", &py_metric_roundtrip, py::arg("p") = 2,
        py::arg("q") = 0, py::arg("seed") = 1,
        "Max reconstruction error of random metric fields with signature "
        "(p, q).");
  m.def("list_scenarios", &tam::list_scenarios,
        "Text table of the builtin scenarios.");
  m.def("run", &py_run, py::arg("command"), py::arg("scenario") = "",
        py::arg("seed") = 1, py::arg("grid") = 8,
        py::arg("colatitude") = 1.0471975511965976,
        py::arg("signature") = std::pair<int, int>{2, 0},
        py::arg("tolerances") = std::map<std::string, double>{},
        py::arg("with_timestamp") = true,
        "Run a scenario and return its JSON report.");
}
