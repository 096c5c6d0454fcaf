#include "pep1d/pep1d.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pep;

namespace {

InitialData make_data(std::vector<double> positions, std::vector<double> masses,
                      std::vector<double> velocities, double tau) {
    return InitialData(AtomicMeasure(std::move(positions), std::move(masses)), std::move(velocities), tau);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bindings for the pep1d solver";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<Tolerances>(m, "Tolerances")
        .def(py::init<>())
        .def(py::init([](double tie, double pos, double event) { return Tolerances{tie, pos, event}; }),
             py::arg("tie") = 1e-12, py::arg("pos") = 1e-12, py::arg("event") = 1e-11)
        .def_readwrite("tie", &Tolerances::tie)
        .def_readwrite("pos", &Tolerances::pos)
        .def_readwrite("event", &Tolerances::event);

    py::class_<AtomicMeasure>(m, "AtomicMeasure")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("positions"), py::arg("masses"))
        .def_property_readonly("positions", &AtomicMeasure::positions)
        .def_property_readonly("masses", &AtomicMeasure::masses)
        .def_property_readonly("total_mass", &AtomicMeasure::total_mass)
        .def("__len__", &AtomicMeasure::size);

    py::class_<InitialData>(m, "InitialData")
        .def(py::init(&make_data), py::arg("positions"), py::arg("masses"), py::arg("velocities"),
             py::arg("tau"))
        .def_property_readonly("measure", &InitialData::measure)
        .def_property_readonly("velocities", &InitialData::velocities)
        .def_property_readonly("tau", &InitialData::tau)
        .def_property_readonly("U0", &InitialData::U0)
        .def_property_readonly("total_mass", &InitialData::total_mass)
        .def("with_tau", &InitialData::with_tau)
        .def("__len__", &InitialData::size);

    py::enum_<Branch>(m, "Branch")
        .value("VacuumRight", Branch::VacuumRight)
        .value("VacuumLeft", Branch::VacuumLeft)
        .value("DeltaShock", Branch::DeltaShock)
        .value("Characteristic", Branch::Characteristic)
        .value("Initial", Branch::Initial)
        .value("Offsupport", Branch::Offsupport);

    py::class_<MinimizerResult>(m, "MinimizerResult")
        .def_readonly("nu", &MinimizerResult::nu)
        .def_readonly("y_star", &MinimizerResult::y_star)
        .def_readonly("y_star_up", &MinimizerResult::y_star_up)
        .def_readonly("attained_at_y_star", &MinimizerResult::attained_at_y_star)
        .def_readonly("k_min", &MinimizerResult::k_min)
        .def_readonly("k_max", &MinimizerResult::k_max);

    py::class_<SolutionSample>(m, "SolutionSample")
        .def_readonly("x", &SolutionSample::x)
        .def_readonly("t", &SolutionSample::t)
        .def_readonly("m", &SolutionSample::m)
        .def_readonly("q", &SolutionSample::q)
        .def_readonly("u", &SolutionSample::u)
        .def_readonly("E", &SolutionSample::E)
        .def_readonly("nu", &SolutionSample::nu)
        .def_readonly("theta", &SolutionSample::theta)
        .def_readonly("omega", &SolutionSample::omega)
        .def_readonly("h", &SolutionSample::h)
        .def_readonly("branch", &SolutionSample::branch);

    py::class_<Cluster>(m, "Cluster")
        .def_readonly("position", &Cluster::position)
        .def_readonly("velocity", &Cluster::velocity)
        .def_readonly("mass", &Cluster::mass)
        .def_readonly("first", &Cluster::first)
        .def_readonly("last", &Cluster::last);

    py::class_<ClusterState>(m, "ClusterState")
        .def_readonly("time", &ClusterState::time)
        .def_readonly("clusters", &ClusterState::clusters)
        .def("total_mass", &ClusterState::total_mass)
        .def("total_momentum", &ClusterState::total_momentum);

    py::class_<MergeEvent>(m, "MergeEvent")
        .def_readonly("time", &MergeEvent::time)
        .def_readonly("position", &MergeEvent::position)
        .def_readonly("merged", &MergeEvent::merged);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("events", &Trajectory::events)
        .def_readonly("t_end", &Trajectory::t_end)
        .def("state_at", &Trajectory::state_at)
        .def("collapsed", &Trajectory::collapsed);

    py::class_<ScaledSample>(m, "ScaledSample")
        .def_readonly("m_tau", &ScaledSample::m_tau)
        .def_readonly("u_tau", &ScaledSample::u_tau)
        .def_readonly("q_tau_over_tau", &ScaledSample::q_tau_over_tau)
        .def_readonly("branch", &ScaledSample::branch);

    py::class_<RelaxationRow>(m, "RelaxationRow")
        .def_readonly("tau", &RelaxationRow::tau)
        .def_readonly("err_m", &RelaxationRow::err_m)
        .def_readonly("err_u", &RelaxationRow::err_u);

    py::class_<RelaxationReport>(m, "RelaxationReport")
        .def_readonly("t", &RelaxationReport::t)
        .def_readonly("rows", &RelaxationReport::rows)
        .def_readonly("monotone_m", &RelaxationReport::monotone_m)
        .def_readonly("monotone_u", &RelaxationReport::monotone_u);

    const Tolerances d{};
    m.def("eval_F", &eval_F, py::arg("data"), py::arg("y"), py::arg("x"), py::arg("t"));
    m.def("minimize_F", &minimize_F, py::arg("data"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def("initial_speed_c", &initial_speed_c, py::arg("data"), py::arg("y"), py::arg("x"), py::arg("t"));
    m.def("eval_m", &eval_m, py::arg("data"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def("eval_q", &eval_q, py::arg("data"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def(
        "eval_u",
        [](const InitialData& data, double x, double t, const Tolerances& tol) {
            const VelocityResult r = eval_u(data, x, t, tol);
            return py::make_tuple(r.u, r.branch);
        },
        py::arg("data"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def("eval_E", &eval_E, py::arg("data"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def("solve_point", &solve_point, py::arg("data"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def("forward_position", &forward_position, py::arg("data"), py::arg("atom"), py::arg("t"),
          py::arg("tol") = d);
    m.def("simulate_ep", &simulate_ep, py::arg("data"), py::arg("t_end"), py::arg("tol") = d);
    m.def("simulate_drift", &simulate_drift, py::arg("measure"), py::arg("t_end"), py::arg("tol") = d);
    m.def("eval_mbar", &eval_mbar, py::arg("measure"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def("eval_qbar", &eval_qbar, py::arg("measure"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def(
        "eval_ubar",
        [](const AtomicMeasure& measure, double x, double t, const Tolerances& tol) {
            const VelocityResult r = eval_ubar(measure, x, t, tol);
            return py::make_tuple(r.u, r.branch);
        },
        py::arg("measure"), py::arg("x"), py::arg("t"), py::arg("tol") = d);
    m.def("eval_scaled", &eval_scaled, py::arg("data"), py::arg("x"), py::arg("t"), py::arg("tau"),
          py::arg("tol") = d);
    m.def("default_tau_sequence", &default_tau_sequence);
    m.def("convergence_study", &convergence_study, py::arg("data"), py::arg("t"), py::arg("x_grid"),
          py::arg("tau_sequence"), py::arg("tol") = d);
}
