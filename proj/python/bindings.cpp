// Python module exposing the main operations: Dickman rho and its
// companions, the kernel-side saddle machinery, exact counters, asymptotic
// estimates and the discretization sandwich.  Heavy calls drop the GIL.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "friable/estimators.hpp"
#include "friable/kernel_saddle.hpp"
#include "friable/sandwich.hpp"
#include "friable/sieves.hpp"
#include "friable/special_functions.hpp"
#include "friable/util.hpp"

namespace py = pybind11;
using namespace friable;

namespace {

const ZetaEvaluator& default_zeta() {
    static const ZetaEvaluator z;
    return z;
}

SandwichSchedule resolve_schedule(const std::optional<SandwichSchedule>& s,
                                  ScheduleKind kind, double x, double u,
                                  double theta, double alpha) {
    if (s) return *s;
    return kind == ScheduleKind::friable
               ? default_schedule_friable(x, u)
               : default_schedule_kernel(x, theta, alpha);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Exact and asymptotic counting of friable integers and "
        "squarefree-kernel thresholds";

    py::register_exception<resource_error>(m, "ResourceError",
                                           PyExc_RuntimeError);

    // ---- Dickman rho and friends ----

    py::class_<RhoTable>(m, "RhoTable")
        .def_readonly("grid_step", &RhoTable::grid_step)
        .def_readonly("steps_per_unit", &RhoTable::steps_per_unit)
        .def_readonly("max_v", &RhoTable::max_v)
        .def("covers", &RhoTable::covers, py::arg("v"))
        .def("__repr__", [](const RhoTable& t) {
            return "RhoTable(max_v=" + std::to_string(t.max_v) +
                   ", steps_per_unit=" + std::to_string(t.steps_per_unit) + ")";
        });

    m.def("build_rho_table", &build_rho_table, py::arg("max_v"),
          py::arg("steps_per_unit") = 256,
          py::call_guard<py::gil_scoped_release>());
    m.def("rho", &rho, py::arg("table"), py::arg("v"));
    m.def("log_rho", &log_rho, py::arg("table"), py::arg("v"));
    m.def("rho_prime", &rho_prime, py::arg("table"), py::arg("v"));
    m.def("dickman_r", &dickman_r, py::arg("table"), py::arg("v"));
    m.def(
        "rho_integral",
        [](const RhoTable& t, std::optional<double> b) {
            return b ? rho_integral(t, *b) : rho_integral(t);
        },
        py::arg("table"), py::arg("b") = py::none());

    m.def("xi", &xi, py::arg("v"));
    m.def("xi_prime", &xi_prime, py::arg("v"));
    m.def(
        "zeta_real", [](double s) { return zeta_real(default_zeta(), s); },
        py::arg("s"));
    m.def(
        "big_z", [](double s) { return big_z(default_zeta(), s); },
        py::arg("s"));

    // ---- exact counters ----

    py::class_<FactorTables>(m, "FactorTables")
        .def_readonly("limit", &FactorTables::limit)
        .def("__repr__", [](const FactorTables& t) {
            return "FactorTables(limit=" + std::to_string(t.limit) + ")";
        });

    m.def("build_tables", &build_tables, py::arg("limit"),
          py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("psi_exact", &psi_exact, py::arg("tables"), py::arg("x"),
          py::arg("y"), py::call_guard<py::gil_scoped_release>());
    m.def("d_exact", &d_exact, py::arg("tables"), py::arg("x"), py::arg("u"),
          py::call_guard<py::gil_scoped_release>());
    m.def("n_exact", &n_exact, py::arg("tables"), py::arg("x"), py::arg("y"),
          py::call_guard<py::gil_scoped_release>());
    m.def("s_exact", &s_exact, py::arg("tables"), py::arg("x"),
          py::arg("theta"), py::arg("alpha") = 0.0,
          py::call_guard<py::gil_scoped_release>());

    py::enum_<SumNumerator>(m, "SumNumerator")
        .value("log_n", SumNumerator::log_n)
        .value("log_x", SumNumerator::log_x);

    m.def("dickman_sum_exact", &dickman_sum_exact, py::arg("tables"),
          py::arg("x"), py::arg("which") = SumNumerator::log_n,
          py::call_guard<py::gil_scoped_release>());
    m.def("integral_identity_check", &integral_identity_check,
          py::arg("tables"), py::arg("x"),
          py::call_guard<py::gil_scoped_release>());

    // ---- kernel-side saddle machinery ----

    py::class_<SaddleContext>(m, "SaddleContext")
        .def_readonly("prime_limit", &SaddleContext::prime_limit)
        .def_readwrite("direct_sum_cap", &SaddleContext::direct_sum_cap)
        .def_readonly("inv_n2psi_total", &SaddleContext::inv_n2psi_total)
        .def("__repr__", [](const SaddleContext& c) {
            return "SaddleContext(prime_limit=" +
                   std::to_string(c.prime_limit) + ")";
        });

    m.def(
        "build_saddle_context",
        [](uint64_t prime_limit) { return build_saddle_context(prime_limit); },
        py::arg("prime_limit") = 10'000'000,
        py::call_guard<py::gil_scoped_release>());
    m.def("psi_mult", &psi_mult, py::arg("n"));
    m.def("g_value", &g_value, py::arg("ctx"), py::arg("sigma"));
    m.def("g_prime", &g_prime, py::arg("ctx"), py::arg("sigma"));
    m.def("sigma_solve", &sigma_solve, py::arg("ctx"), py::arg("t"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sigma_asymptotic", &sigma_asymptotic, py::arg("t"),
          py::arg("order") = 2);

    py::class_<KernelF>(m, "KernelF")
        .def_readonly("value", &KernelF::value)
        .def_readonly("reduced_accuracy", &KernelF::reduced_accuracy)
        .def_readonly("terms", &KernelF::terms)
        .def("__repr__", [](const KernelF& f) {
            return "KernelF(value=" + std::to_string(f.value) +
                   (f.reduced_accuracy ? ", reduced_accuracy=True)" : ")");
        });

    m.def("kernel_f", &kernel_f, py::arg("ctx"), py::arg("t"),
          py::arg("tables") = nullptr,
          py::call_guard<py::gil_scoped_release>());
    m.def("kernel_f_saturating", &kernel_f_saturating, py::arg("ctx"),
          py::arg("t"), py::arg("tables") = nullptr,
          py::call_guard<py::gil_scoped_release>());

    py::class_<FIncrement>(m, "FIncrement")
        .def_readonly("ratio", &FIncrement::ratio)
        .def_readonly("increment", &FIncrement::increment)
        .def_readonly("sigma_w", &FIncrement::sigma_w)
        .def_readonly("f_w", &FIncrement::f_w);

    m.def("f_increment_check", &f_increment_check, py::arg("ctx"),
          py::arg("w"), py::arg("h"),
          py::call_guard<py::gil_scoped_release>());

    // ---- asymptotic estimates ----

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_readonly("value", &EstimateReport::value)
        .def_readonly("main_term", &EstimateReport::main_term)
        .def_readonly("correction_term", &EstimateReport::correction_term)
        .def_readonly("error_scale", &EstimateReport::error_scale)
        .def_readonly("multiplicative", &EstimateReport::multiplicative)
        .def_readonly("in_range", &EstimateReport::in_range)
        .def_readonly("notes", &EstimateReport::notes)
        .def("json", &report_json)
        .def("__repr__", [](const EstimateReport& r) { return report_json(r); });

    py::enum_<DForm>(m, "DForm")
        .value("saddle_factor", DForm::saddle_factor)
        .value("two_term", DForm::two_term);

    m.def("psi_saddle", &psi_saddle, py::arg("rho_table"), py::arg("x"),
          py::arg("y"));
    m.def("psi_two_term", &psi_two_term, py::arg("rho_table"), py::arg("x"),
          py::arg("y"));
    m.def("d_estimate", &d_estimate, py::arg("rho_table"), py::arg("x"),
          py::arg("u"), py::arg("form") = DForm::two_term);
    m.def("dickman_sum_estimate", &dickman_sum_estimate, py::arg("x"),
          py::arg("which") = SumNumerator::log_n);
    m.def("n_estimate", &n_estimate, py::arg("ctx"), py::arg("x"),
          py::arg("y"), py::call_guard<py::gil_scoped_release>());
    m.def("s_estimate", &s_estimate, py::arg("ctx"), py::arg("x"),
          py::arg("theta"), py::arg("alpha") = 0.0,
          py::call_guard<py::gil_scoped_release>());
    m.def("d_error_scale", &d_error_scale, py::arg("x"), py::arg("y"));
    m.def("d_error_scale_refined", &d_error_scale_refined, py::arg("x"),
          py::arg("y"));
    m.def(
        "hrange_contains",
        [](double x, double y, double b, double c) {
            return hrange_contains(HRange{b, c}, x, y);
        },
        py::arg("x"), py::arg("y"), py::arg("b") = 1.7,
        py::arg("c") = 10.001);

    // ---- discretization sandwich ----

    py::enum_<ScheduleKind>(m, "ScheduleKind")
        .value("friable", ScheduleKind::friable)
        .value("kernel", ScheduleKind::kernel);

    py::class_<SandwichSchedule>(m, "SandwichSchedule")
        .def_readonly("kind", &SandwichSchedule::kind)
        .def_readonly("x", &SandwichSchedule::x)
        .def_readonly("u", &SandwichSchedule::u)
        .def_readonly("theta", &SandwichSchedule::theta)
        .def_readonly("alpha", &SandwichSchedule::alpha)
        .def_readonly("epsilon", &SandwichSchedule::epsilon)
        .def_readonly("K", &SandwichSchedule::K)
        .def_readonly("capped", &SandwichSchedule::capped)
        .def("x_at", &SandwichSchedule::x_at, py::arg("k"))
        .def("y_at", &SandwichSchedule::y_at, py::arg("k"));

    m.def("default_schedule_friable", &default_schedule_friable, py::arg("x"),
          py::arg("u"));
    m.def("default_schedule_kernel", &default_schedule_kernel, py::arg("x"),
          py::arg("theta"), py::arg("alpha") = 0.0);

    py::class_<SandwichResult>(m, "SandwichResult")
        .def_readonly("lower", &SandwichResult::lower)
        .def_readonly("upper", &SandwichResult::upper)
        .def("__repr__", [](const SandwichResult& r) {
            return "SandwichResult(lower=" + std::to_string(r.lower) +
                   ", upper=" + std::to_string(r.upper) + ")";
        });

    m.def(
        "sandwich_d",
        [](const FactorTables& t, double x, double u,
           std::optional<SandwichSchedule> sched) {
            const SandwichSchedule s =
                resolve_schedule(sched, ScheduleKind::friable, x, u, 0, 0);
            TwoVarEvaluator ev{[&t](double xv, double yv) {
                                   return double(psi_exact(t, xv, yv));
                               },
                               true};
            py::gil_scoped_release drop;
            return sandwich_d(ev, x, u, s);
        },
        py::arg("tables"), py::arg("x"), py::arg("u"),
        py::arg("schedule") = py::none());

    m.def(
        "sandwich_s",
        [](const FactorTables& t, double x, double theta, double alpha,
           std::optional<SandwichSchedule> sched) {
            const SandwichSchedule s = resolve_schedule(
                sched, ScheduleKind::kernel, x, 0, theta, alpha);
            TwoVarEvaluator ev{[&t](double xv, double yv) {
                                   return double(n_exact(t, xv, yv));
                               },
                               true};
            py::gil_scoped_release drop;
            return sandwich_s(ev, x, theta, alpha, s);
        },
        py::arg("tables"), py::arg("x"), py::arg("theta"),
        py::arg("alpha") = 0.0, py::arg("schedule") = py::none());
}
