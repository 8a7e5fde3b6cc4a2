#include <sstream>
#include <string>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dwhj/commands.hpp"
#include "dwhj/eikonal.hpp"
#include "dwhj/errors.hpp"
#include "dwhj/expr.hpp"

namespace py = pybind11;

namespace {

dwhj::Scenario scenario_from(const std::string& text) {
    std::istringstream in(text);
    return dwhj::parse_scenario(in);
}

// (exit code, JSON text); the Python side decodes the JSON.
std::pair<int, std::string> run(const std::string& command, const std::string& text) {
    const dwhj::Scenario sc = scenario_from(text);
    dwhj::CommandResult r;
    if (command == "verify-ddw") r = dwhj::cmd_verify_ddw(sc);
    else if (command == "audit") r = dwhj::cmd_audit(sc);
    else if (command == "evolve") r = dwhj::cmd_evolve(sc);
    else if (command == "convergence") r = dwhj::cmd_convergence(sc);
    else if (command == "report") r = dwhj::cmd_report(sc);
    else throw py::value_error("unknown command '" + command + "'");
    return {r.exit_code, r.json.dump()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hamilton-Jacobi verification for Maxwell fields";

    py::register_exception<dwhj::Error>(m, "Error", PyExc_RuntimeError);

    m.def("run", &run, py::arg("command"), py::arg("scenario_text"));
    m.attr("schema") = dwhj::kSchemaVersion;

    py::class_<dwhj::ScalarExpr>(m, "ScalarExpr")
        .def(py::init([](const std::string& text, const std::map<std::string, double>& params) {
                 dwhj::ParamMap p(params.begin(), params.end());
                 return dwhj::parse_expr(text, p);
             }),
             py::arg("text"), py::arg("params") = std::map<std::string, double>{})
        .def("__call__",
             [](const dwhj::ScalarExpr& e, std::array<double, 4> x) { return e.eval(x); })
        .def("partial", &dwhj::ScalarExpr::partial, py::arg("mu"))
        .def("time_antiderivative", &dwhj::ScalarExpr::time_antiderivative)
        .def("is_zero", &dwhj::ScalarExpr::is_zero)
        .def("__str__", &dwhj::ScalarExpr::to_string)
        .def("__repr__", [](const dwhj::ScalarExpr& e) { return "ScalarExpr(" + e.to_string() + ")"; })
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self == py::self);

    m.def(
        "ddw_residual",
        [](const std::string& text, std::array<double, 4> A, std::array<double, 4> x) {
            return dwhj::ddw_residual(dwhj::make_ansatz(scenario_from(text)), A, x);
        },
        py::arg("scenario_text"), py::arg("A"), py::arg("x"));
}
