#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpcover/baselines.hpp"
#include "gpcover/commands.hpp"
#include "gpcover/fleet.hpp"
#include "gpcover/io.hpp"

namespace py = pybind11;
using namespace gpcover;

namespace {

MeasurementMultiset to_multiset(const std::vector<std::tuple<double, double, int>>& sites) {
  MeasurementMultiset m;
  for (const auto& [x, y, n] : sites) m.push_back({{x, y}, n, std::nullopt});
  return m;
}

}  // namespace

PYBIND11_MODULE(_gpcover, m) {
  m.doc() = "Variance-guaranteed sampling plans for Gaussian-process fields";

  static py::exception<Error> error(m, "GpcoverError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Point>(m, "Point")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def(py::init([](const std::pair<double, double>& p) { return Point{p.first, p.second}; }))
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def(py::self == py::self)
      .def("__iter__", [](const Point& p) { return py::iter(py::make_tuple(p.x, p.y)); })
      .def("__repr__", [](const Point& p) {
        return "Point(" + io::format_double(p.x) + ", " + io::format_double(p.y) + ")";
      });
  py::implicitly_convertible<py::tuple, Point>();

  py::class_<Hyperparameters>(m, "Hyperparameters")
      .def(py::init<double, double, double>(), py::arg("length_scale"), py::arg("signal_variance"),
           py::arg("noise_variance"))
      .def_readwrite("length_scale", &Hyperparameters::length_scale)
      .def_readwrite("signal_variance", &Hyperparameters::signal_variance)
      .def_readwrite("noise_variance", &Hyperparameters::noise_variance)
      .def("__repr__", [](const Hyperparameters& h) {
        return "Hyperparameters(" + io::format_double(h.length_scale) + ", " +
               io::format_double(h.signal_variance) + ", " + io::format_double(h.noise_variance) + ")";
      });

  py::class_<Environment>(m, "Environment")
      .def_static("rectangle", &Environment::rectangle, py::arg("min"), py::arg("max"))
      .def_static("polygon", &Environment::polygon, py::arg("vertices"))
      .def_static("from_json", &io::parse_environment)
      .def("to_json", &io::environment_to_json)
      .def("contains", &Environment::contains)
      .def("area", &Environment::area)
      .def("outline", &Environment::outline);

  py::class_<Disk>(m, "Disk")
      .def(py::init<Point, double>(), py::arg("center"), py::arg("radius"))
      .def_readwrite("center", &Disk::center)
      .def_readwrite("radius", &Disk::radius);

  py::class_<PlanEntry>(m, "PlanEntry")
      .def_readonly("location", &PlanEntry::location)
      .def_readonly("count", &PlanEntry::count)
      .def_readonly("source_disk", &PlanEntry::source_disk);

  py::class_<MeasurementPlan>(m, "MeasurementPlan")
      .def_readonly("entries", &MeasurementPlan::entries)
      .def_readonly("mis", &MeasurementPlan::mis)
      .def_readonly("r_max", &MeasurementPlan::r_max)
      .def_readonly("small_radius", &MeasurementPlan::small_radius)
      .def_readonly("n_alpha", &MeasurementPlan::n_alpha)
      .def("location_count", &MeasurementPlan::location_count)
      .def("measurement_count", &MeasurementPlan::measurement_count)
      .def("to_csv", &io::plan_to_csv);

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("max_variance", &VerificationReport::max_variance)
      .def_readonly("argmax", &VerificationReport::argmax)
      .def_readonly("mean_variance", &VerificationReport::mean_variance)
      .def_readonly("grid_points", &VerificationReport::grid_points)
      .def_readonly("passed", &VerificationReport::pass);

  py::class_<Waypoint>(m, "Waypoint")
      .def_readonly("location", &Waypoint::location)
      .def_readonly("dwell", &Waypoint::dwell)
      .def_readonly("group", &Waypoint::group);

  py::class_<Tour>(m, "Tour")
      .def_readonly("depot", &Tour::depot)
      .def_readonly("waypoints", &Tour::waypoints)
      .def_readonly("closed", &Tour::closed)
      .def("total_dwell", &Tour::total_dwell)
      .def("length", &tour_length)
      .def("time", [](const Tour& t, double eta) { return tour_time(t, {1.0, eta}); }, py::arg("eta"))
      .def("to_json", [](const Tour& t, double eta) { return io::tour_to_json(t, {1.0, eta}); }, py::arg("eta"))
      .def(py::self == py::self);

  py::class_<DiskCoverTour>(m, "DiskCoverTour")
      .def_readonly("plan", &DiskCoverTour::plan)
      .def_readonly("tour", &DiskCoverTour::tour)
      .def_readonly("center_route_length", &DiskCoverTour::center_route_length)
      .def_readonly("center_route_lower_bound", &DiskCoverTour::center_route_lower_bound);

  py::class_<MakespanCertificate>(m, "MakespanCertificate")
      .def_readonly("makespan", &MakespanCertificate::makespan)
      .def_readonly("bound", &MakespanCertificate::bound)
      .def_readonly("satisfied", &MakespanCertificate::satisfied);

  m.def("kernel", &kernel_eval, py::arg("a"), py::arg("b"), py::arg("h"));
  m.def(
      "posterior_variance",
      [](const Point& x, const std::vector<std::tuple<double, double, int>>& sites, const Hyperparameters& h) {
        return posterior_variance(x, to_multiset(sites), h);
      },
      py::arg("x"), py::arg("sites"), py::arg("h"), "sites: list of (x, y, count)");
  m.def("repeated_measurement_variance", &repeated_measurement_variance, py::arg("r"), py::arg("n"), py::arg("h"));
  m.def(
      "nlml",
      [](const std::vector<std::tuple<double, double, double>>& data, const Hyperparameters& h) {
        std::vector<Observation> obs;
        for (const auto& [x, y, v] : data) obs.push_back({{x, y}, v});
        return nlml(obs, h);
      },
      py::arg("data"), py::arg("h"));
  m.def(
      "fit_hyperparameters",
      [](const std::vector<std::tuple<double, double, double>>& data) {
        std::vector<Observation> obs;
        for (const auto& [x, y, v] : data) obs.push_back({{x, y}, v});
        const FitResult fit = fit_hyperparameters(obs, SearchGrid::defaults_for(obs));
        return py::make_tuple(fit.hyperparameters, fit.nlml);
      },
      py::arg("data"), "Grid search over log-spaced hyperparameters; data must be centered.");
  m.def("compute_r_max", &compute_r_max, py::arg("h"), py::arg("delta"));
  m.def("sufficient_radius", &sufficient_radius, py::arg("h"), py::arg("delta"), py::arg("n"));
  m.def(
      "compute_n_alpha",
      [](const Hyperparameters& h, double delta, double alpha) { return compute_n_alpha(h, {delta, alpha}); },
      py::arg("h"), py::arg("delta"), py::arg("alpha") = 2.0);
  m.def(
      "disk_cover_placement",
      [](const Environment& env, const Hyperparameters& h, double delta, double alpha, bool hard_boundary) {
        return disk_cover_placement(env, h, {delta, alpha}, PlacementOptions{hard_boundary});
      },
      py::arg("env"), py::arg("h"), py::arg("delta"), py::arg("alpha") = 2.0, py::arg("hard_boundary") = false);
  m.def(
      "verify_plan",
      [](const MeasurementPlan& plan, const Environment& env, const Hyperparameters& h, double delta,
         double grid_spacing) { return verify_plan(plan, env, h, delta, grid_spacing); },
      py::arg("plan"), py::arg("env"), py::arg("h"), py::arg("delta"), py::arg("grid_spacing") = 1.0);
  m.def(
      "disk_cover_tour",
      [](const Environment& env, const Hyperparameters& h, double delta, double alpha, double eta,
         std::optional<Point> depot) { return disk_cover_tour(env, h, {delta, alpha}, {1.0, eta}, depot); },
      py::arg("env"), py::arg("h"), py::arg("delta"), py::arg("alpha") = 2.0, py::arg("eta") = 1.0,
      py::arg("depot") = std::nullopt);
  m.def(
      "tsp_heuristic",
      [](const std::vector<Point>& points, const Point& depot) { return tsp_heuristic(points, depot); },
      py::arg("points"), py::arg("depot"));
  m.def(
      "split_tour",
      [](const Tour& tour, int k, int n2, double eta) {
        const auto params = make_split_parameters(tour, k, n2, eta);
        const auto set = split_tour(tour, params);
        return py::make_tuple(set.subtours, makespan_certificate(set, params, {1.0, eta}));
      },
      py::arg("tour"), py::arg("k"), py::arg("n2"), py::arg("eta"));
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"gpcover"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return run_cli(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Run a gpcover subcommand; returns the exit code.");
}
