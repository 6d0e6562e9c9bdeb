// Python veneer over the simulation core: parameter construction, the three
// QFI pipelines, channel/fit utilities, and the structural-invariant battery.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "tcqfi/exact_sim.hpp"
#include "tcqfi/fit.hpp"
#include "tcqfi/method1.hpp"
#include "tcqfi/method2.hpp"
#include "tcqfi/model.hpp"
#include "tcqfi/qfi.hpp"
#include "tcqfi/validate.hpp"

namespace py = pybind11;
using namespace tcqfi;

namespace {

ModelParams make_params(int s, double omega_c, double omega_a, double coupling,
                        std::optional<int> photon_number, std::optional<cplx> alpha,
                        int fock_cutoff) {
    if (photon_number.has_value() == alpha.has_value())
        throw ValidationError(
            "give exactly one of photon_number (number state) or alpha (coherent state)");
    ModelParams p;
    p.s = s;
    p.omega_c = omega_c;
    p.omega_a = omega_a;
    p.Omega = coupling;
    p.field_init = photon_number ? FieldInit::fock(*photon_number) : FieldInit::coherent(*alpha);
    p.n_max = fock_cutoff;
    return p.resolved(); // fills in the default truncation level and checks invariants
}

// QFI of a detuning family: vary omega_a at fixed omega_c
double family_qfi(const ModelParams& p, const std::function<DensityMatrix(const ModelParams&)>& at) {
    DensityFamily fam = [&](double d) {
        ModelParams q = p;
        q.omega_a = q.omega_c + d;
        return at(q);
    };
    return qfi_spectral(fam, p.delta()).value;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "collective-spin cavity simulation: Fisher information of the detuning "
              "under periodic majority-vote correction";
    m.attr("__version__") = "1.0.0";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

    py::class_<ModelParams>(m, "Params")
        .def_readwrite("s", &ModelParams::s)
        .def_readwrite("omega_c", &ModelParams::omega_c)
        .def_readwrite("omega_a", &ModelParams::omega_a)
        .def_readwrite("coupling", &ModelParams::Omega)
        .def_readwrite("fock_cutoff", &ModelParams::n_max)
        .def_property_readonly("delta", &ModelParams::delta)
        .def_property_readonly("n_eff", &ModelParams::n_eff)
        .def("__repr__", [](const ModelParams& p) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "Params(s=%d, omega_c=%g, omega_a=%g, coupling=%g, n_eff=%g)", p.s,
                          p.omega_c, p.omega_a, p.Omega, p.n_eff());
            return std::string(buf);
        });

    m.def("params", &make_params, py::arg("s"), py::arg("omega_c"), py::arg("omega_a"),
          py::arg("coupling"), py::arg("photon_number") = std::nullopt,
          py::arg("alpha") = std::nullopt, py::arg("fock_cutoff") = -1,
          "Build a parameter set; the initial field is a photon-number state or a "
          "coherent state.");

    // ---- exact pipeline ----------------------------------------------------
    m.def(
        "exact_trajectory",
        [](const ModelParams& p, const std::vector<double>& times,
           std::optional<double> interval) {
            std::optional<exact_sim::QecSchedule> sched;
            if (interval) {
                exact_sim::QecSchedule s;
                s.interval = *interval;
                sched = s;
            }
            exact_sim::Trajectory tr = exact_sim::simulate(p, sched, times);
            std::vector<double> corner(tr.corner_coherence.size());
            for (std::size_t i = 0; i < corner.size(); ++i)
                corner[i] = std::abs(tr.corner_coherence[i]);
            py::dict out;
            out["times"] = tr.times;
            out["qfi"] = tr.qfi;
            out["code_population"] = tr.code_population;
            out["corner_magnitude"] = corner;
            return out;
        },
        py::arg("params"), py::arg("times"), py::arg("interval") = std::nullopt,
        "Evolve the codeword superposition exactly along a time grid; a correction "
        "interval enables periodic majority-vote correction. Returns per-point QFI "
        "of the detuning plus code population and corner coherence.");

    m.def("error_rate_empirical", &exact_sim::error_rate_empirical, py::arg("params"),
          py::arg("interval"),
          "Fraction of state weight driven out of the codewords per unit time, "
          "measured across one uncorrected interval.");

    // ---- closed-form pipeline ----------------------------------------------
    m.def("chi", &method1::chi, py::arg("t"), py::arg("params"),
          "Per-atom flip probability across time t at the pinned photon number.");
    m.def("error_rate_law", &method1::error_rate_law, py::arg("interval"), py::arg("params"),
          "Leading-order codeword-leakage rate (s/4)(n+1) coupling^2 * interval.");
    m.def(
        "closed_form_state",
        [](const ModelParams& p, double t) { return method1::uncorrected_entries(t, p); },
        py::arg("params"), py::arg("t"),
        "Closed-form reduced atomic state after plain evolution for time t "
        "(number-state field only).");
    m.def(
        "closed_form_corrected",
        [](const ModelParams& p, long corrections, double interval, double residual) {
            return method1::corrected_density(corrections, interval, residual, p);
        },
        py::arg("params"), py::arg("corrections"), py::arg("interval"),
        py::arg("residual") = 0.0,
        "Closed-form reduced state after 'corrections' correction intervals plus "
        "a residual stretch of plain evolution.");
    m.def(
        "closed_form_qfi",
        [](const ModelParams& p, double t) {
            return family_qfi(
                p, [t](const ModelParams& q) { return method1::uncorrected_entries(t, q); });
        },
        py::arg("params"), py::arg("t"),
        "Detuning QFI of the closed-form uncorrected reduced state at time t.");

    // ---- transfer-matrix pipeline -------------------------------------------
    m.def(
        "transfer_matrix",
        [](const ModelParams& p, double interval) {
            return method2::total_transfer(interval, p.s, p).matrix;
        },
        py::arg("params"), py::arg("interval"),
        "One evolve-and-correct interval as a real 4x4 map on Bloch (I,x,y,z).");
    m.def(
        "transfer_state",
        [](const ModelParams& p, long corrections, double interval) {
            return method2::corrected_bloch(corrections, interval, p.s, p);
        },
        py::arg("params"), py::arg("corrections"), py::arg("interval"),
        "2x2 code-space state after the given number of correction intervals.");
    m.def(
        "transfer_qfi",
        [](const ModelParams& p, double interval, double t) {
            long eta = std::lround(t / interval);
            return family_qfi(p, [eta, interval](const ModelParams& q) {
                return method2::corrected_bloch(eta, interval, q.s, q);
            });
        },
        py::arg("params"), py::arg("interval"), py::arg("t"),
        "Detuning QFI of the corrected code-space state at t = corrections * interval.");
    m.def(
        "qfi_vs_atoms",
        [](const std::vector<int>& s_list, double interval, double t, const ModelParams& p) {
            return method2::qfi_vs_atoms(s_list, interval, t, p);
        },
        py::arg("s_list"), py::arg("interval"), py::arg("t"), py::arg("params"),
        "Corrected QFI at time t for each atom count, as (s, qfi) pairs.");

    // ---- utilities -----------------------------------------------------------
    m.def(
        "fit_power_law",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            if (x.size() != y.size()) throw ValidationError("x and y must have equal length");
            std::vector<std::pair<double, double>> pts;
            for (std::size_t i = 0; i < x.size(); ++i) pts.push_back({x[i], y[i]});
            PowerLawFit f = fit_power_law(pts);
            return py::make_tuple(f.exponent, f.amplitude, f.r_squared);
        },
        py::arg("x"), py::arg("y"),
        "Least-squares power law in log-log space: (exponent, amplitude, r_squared).");

    m.def(
        "run_validation",
        []() {
            ValidationOutcome out = run_validation();
            py::dict d;
            d["checks"] = out.checks;
            d["violations"] = out.violations;
            d["lines"] = out.lines;
            return d;
        },
        "Deterministic structural-invariant battery; violations must be zero.");
}
