#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "metpath/checks.hpp"
#include "metpath/error.hpp"
#include "metpath/report.hpp"
#include "metpath/variation.hpp"

namespace py = pybind11;
using namespace metpath;

namespace {

py::dict report_dict(const CheckReport& r) {
    py::dict d;
    d["theorem_id"] = std::string(to_string(r.theorem_id));
    d["verdict"] = std::string(to_string(r.verdict));
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["slack"] = r.slack;
    d["params"] = r.params;
    d["notes"] = r.notes;
    return d;
}

CheckOptions options(double tol, int max_level, std::size_t grid) {
    CheckOptions o;
    o.tol = tol;
    o.max_level = max_level;
    o.grid = grid;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Metric derivative, variation and theorem checks for paths in metric spaces";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);

    py::class_<Interval>(m, "Interval")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_readonly("lo", &Interval::lo)
        .def_readonly("hi", &Interval::hi)
        .def("__repr__", [](const Interval& i) {
            std::ostringstream os;
            os << "Interval(" << i.lo << ", " << i.hi << ")";
            return os.str();
        });

    py::class_<Path>(m, "Path")
        .def_property_readonly("domain", &Path::domain)
        .def_property_readonly("breakpoints", &Path::breakpoints)
        .def("evaluate", &Path::evaluate, py::arg("t"))
        .def("distance", &Path::distance, py::arg("s"), py::arg("t"))
        .def("restrict", [](const Path& p, double c, double d) { return restrict(p, c, d); });

    py::class_<FixtureMeta>(m, "FixtureMeta")
        .def_readonly("name", &FixtureMeta::name)
        .def_readonly("known", &FixtureMeta::known)
        .def_readonly("is_continuous", &FixtureMeta::is_continuous)
        .def_readonly("is_bv", &FixtureMeta::is_bv)
        .def_readonly("is_ac", &FixtureMeta::is_ac)
        .def_readonly("has_property_n", &FixtureMeta::has_property_n)
        .def_readonly("is_injective", &FixtureMeta::is_injective)
        .def_readonly("variation_exact", &FixtureMeta::variation_exact);

    py::class_<Fixture>(m, "Fixture")
        .def_readonly("path", &Fixture::path)
        .def_readonly("meta", &Fixture::meta);

    m.def("fixture_names", &fixture_names);
    m.def("make_fixture", &make_fixture, py::arg("name"), py::arg("params") = FixtureParams{});
    m.def(
        "parse_csv",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_csv_path(in);
        },
        py::arg("text"), "Piecewise-linear path from `t,x1,...,xn` CSV text.");
    m.def("load_csv", &parse_csv_file, py::arg("file"));

    m.def(
        "variation",
        [](const Path& p, double tol, int max_level) {
            const RefinementEstimate e = variation(p, tol, max_level);
            py::list trace;
            for (const auto& tp : e.trace) trace.append(py::make_tuple(tp.level, tp.estimate));
            py::dict d;
            d["value"] = e.value;
            d["status"] = std::string(to_string(e.status));
            d["trace"] = trace;
            d["converged_level"] = e.converged_level;
            return d;
        },
        py::arg("path"), py::arg("tol") = 1e-6, py::arg("max_level") = 16);

    m.def(
        "metric_derivative",
        [](const Path& p, double x) {
            const MdEstimate e = metric_derivative(p, x);
            return py::make_tuple(e.value, std::string(to_string(e.status)));
        },
        py::arg("path"), py::arg("x"), "(value, status) of the metric derivative at x.");

    m.def(
        "md_profile",
        [](const Path& p, const std::vector<double>& grid) {
            py::list out;
            for (const MdSample& s : md_profile(p, grid)) out.append(py::make_tuple(s.x, s.md, std::string(to_string(s.status))));
            return out;
        },
        py::arg("path"), py::arg("grid"));

    m.def(
        "hausdorff_length",
        [](const Path& p, const std::vector<std::pair<double, double>>& set, const std::vector<double>& deltas) {
            std::vector<Interval> comps;
            for (const auto& [lo, hi] : set) comps.push_back({lo, hi});
            const CoverEstimate e = hausdorff_length(p, IntervalUnion(comps), deltas);
            return py::make_tuple(e.upper, std::string(to_string(e.status)));
        },
        py::arg("path"), py::arg("set"), py::arg("deltas") = std::vector<double>{1e-1, 1e-2, 1e-3});

    m.def(
        "integrate_grid",
        [](const std::vector<std::pair<double, double>>& values) {
            const IntegralEstimate e = integrate_grid(values);
            return py::make_tuple(e.value, std::string(to_string(e.flag)));
        },
        py::arg("values"), "Trapezoid integral of (x, value) pairs with an integrability flag.");

    m.def(
        "run_checks",
        [](const Fixture& fx, const std::string& checks, double tol, int max_level, std::size_t grid) {
            const auto ids = parse_check_list(checks);
            RunConfig probe;
            probe.fixture = fx.meta.name;
            probe.checks = ids;
            probe.options = options(tol, max_level, grid);
            validate(probe);
            std::vector<CheckReport> reports;
            {
                py::gil_scoped_release release;
                reports = run_checks(fx, ids, probe.options, checks != "all");
            }
            py::list out;
            for (const auto& r : reports) out.append(report_dict(r));
            return out;
        },
        py::arg("fixture"), py::arg("checks") = "all", py::arg("tol") = 1e-3, py::arg("max_level") = 14,
        py::arg("grid") = 4096, "Run theorem checks; returns one dict per report, in theorem order.");

    m.def(
        "reports_json",
        [](const Fixture& fx, const std::string& checks) {
            std::vector<CheckReport> reports;
            const auto ids = parse_check_list(checks);
            {
                py::gil_scoped_release release;
                reports = run_checks(fx, ids, CheckOptions{}, checks != "all");
            }
            return reports_to_json(reports);
        },
        py::arg("fixture"), py::arg("checks") = "all");
}
