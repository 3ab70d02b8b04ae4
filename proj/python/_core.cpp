// _core.cpp — pybind11 bindings over the main operations
//
// Exposes the model, the dephasing dynamics, the three QFI forms, and the
// time-optimization / sweep drivers.  Mirrors the C++ API one-to-one; all
// numerical conventions (collapse handling, derivative methods, tie-breaks)
// are identical because the same code runs underneath.

#include <optional>
#include <stdexcept>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinprobe/dynamics.hpp"
#include "spinprobe/model.hpp"
#include "spinprobe/optimize.hpp"
#include "spinprobe/oracles.hpp"
#include "spinprobe/qfi.hpp"

namespace py = pybind11;
using namespace spinprobe;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Qubit probe dephasing in an interacting spin bath: exact dynamics, quantum "
              "Fisher information, and optimal-time estimation";

    py::enum_<env::Boundary>(m, "Boundary")
        .value("open", env::Boundary::open)
        .value("periodic", env::Boundary::periodic);

    py::enum_<qfi::Parameter>(m, "Parameter")
        .value("temperature", qfi::Parameter::temperature)
        .value("coupling", qfi::Parameter::coupling);

    py::enum_<qfi::DerivativeMethod>(m, "DerivativeMethod")
        .value("finite_difference", qfi::DerivativeMethod::finite_difference)
        .value("analytic", qfi::DerivativeMethod::analytic);

    py::class_<env::ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("epsilon", &env::ModelSpec::epsilon)
        .def_readwrite("delta", &env::ModelSpec::delta)
        .def_readwrite("n_spins", &env::ModelSpec::n_spins)
        .def_readwrite("omega", &env::ModelSpec::omega)
        .def_readwrite("chi", &env::ModelSpec::chi)
        .def_readwrite("g", &env::ModelSpec::g)
        .def_readwrite("temperature", &env::ModelSpec::temperature)
        .def_readwrite("preparation", &env::ModelSpec::preparation)
        .def_readwrite("chain_boundary", &env::ModelSpec::chain_boundary)
        .def_readwrite("omega_list", &env::ModelSpec::omega_list)
        .def_readwrite("chi_list", &env::ModelSpec::chi_list)
        .def("beta", &env::ModelSpec::beta)
        .def("validate", &env::ModelSpec::validate);

    py::class_<qfi::ParamSelector>(m, "ParamSelector")
        .def(py::init<>())
        .def_readwrite("which", &qfi::ParamSelector::which)
        .def_readwrite("value", &qfi::ParamSelector::value);

    py::class_<dyn::BlochState>(m, "BlochState")
        .def_readonly("t", &dyn::BlochState::t)
        .def_readonly("p", &dyn::BlochState::p)
        .def_readonly("gamma", &dyn::BlochState::gamma)
        .def_readonly("omega_phase", &dyn::BlochState::omega_phase);

    py::class_<qfi::QfiPoint>(m, "QfiPoint")
        .def_readonly("t", &qfi::QfiPoint::t)
        .def_readonly("fq_closed", &qfi::QfiPoint::fq_closed)
        .def_readonly("fq_bloch", &qfi::QfiPoint::fq_bloch)
        .def_readonly("fq_sld", &qfi::QfiPoint::fq_sld)
        .def_readonly("derivative_method", &qfi::QfiPoint::derivative_method)
        .def_readonly("closed_fell_back", &qfi::QfiPoint::closed_fell_back);

    py::class_<opt::TimeWindow>(m, "TimeWindow")
        .def(py::init<>())
        .def_readwrite("t_min", &opt::TimeWindow::t_min)
        .def_readwrite("t_max", &opt::TimeWindow::t_max)
        .def_readwrite("n_grid", &opt::TimeWindow::n_grid);

    py::class_<opt::OptimizeResult>(m, "OptimizeResult")
        .def_readonly("t_star", &opt::OptimizeResult::t_star)
        .def_readonly("fq_star", &opt::OptimizeResult::fq_star)
        .def_readonly("monotone", &opt::OptimizeResult::monotone)
        .def_readonly("excluded", &opt::OptimizeResult::excluded);

    m.def(
        "bloch_at",
        [](const env::ModelSpec& spec, double t, bool correlated) {
            return dyn::bloch_at(env::build_class_table(spec), t, correlated);
        },
        py::arg("spec"), py::arg("t"), py::arg("correlated") = true,
        "Probe Bloch state (p, gamma, omega_phase) at time t");

    m.def(
        "qfi_point",
        [](const env::ModelSpec& spec, double t, const qfi::ParamSelector& sel, bool correlated,
           qfi::DerivativeMethod method) {
            return qfi::qfi_point(spec, t, sel, correlated, method);
        },
        py::arg("spec"), py::arg("t"), py::arg("sel"), py::arg("correlated") = true,
        py::arg("method") = qfi::DerivativeMethod::finite_difference,
        "QFI at one time in all three forms (closed, Bloch-identity, SLD)");

    m.def(
        "optimize_over_time",
        [](const env::ModelSpec& spec, const qfi::ParamSelector& sel,
           const opt::TimeWindow& window, bool correlated, qfi::DerivativeMethod method,
           int threads) {
            return opt::optimize_over_time(spec, sel, window, correlated, method, threads);
        },
        py::arg("spec"), py::arg("sel"), py::arg("window") = opt::TimeWindow{},
        py::arg("correlated") = true,
        py::arg("method") = qfi::DerivativeMethod::finite_difference, py::arg("threads") = 1,
        "Maximize the QFI over interaction time (grid + golden-section refinement)");

    m.def(
        "brute_force_bloch",
        [](const env::ModelSpec& spec, double t, bool correlated) {
            return oracles::brute_force_bloch(spec, t, correlated);
        },
        py::arg("spec"), py::arg("t"), py::arg("correlated") = true,
        "Reference Bloch vector from explicit 2^N configuration enumeration (N <= 20)");

    py::register_exception<dyn::CoherenceCollapse>(m, "CoherenceCollapse");
    py::register_exception<opt::CollapseDominatedGrid>(m, "CollapseDominatedGrid");
}
