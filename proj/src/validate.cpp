#include "tcqfi/validate.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <vector>

#include "tcqfi/constants.hpp"
#include "tcqfi/exact_sim.hpp"
#include "tcqfi/method1.hpp"
#include "tcqfi/method2.hpp"
#include "tcqfi/model.hpp"
#include "tcqfi/operators.hpp"
#include "tcqfi/qec.hpp"
#include "tcqfi/qfi.hpp"

namespace tcqfi {

namespace {

ModelParams fock_point() {
    ModelParams p;
    p.s = 3;
    p.omega_c = 2.5;
    p.omega_a = 4.5;
    p.Omega = 2.0;
    p.field_init = FieldInit::fock(99);
    return p;
}

struct Recorder {
    ValidationOutcome out;

    void check(bool ok, const std::string& label, const std::string& detail) {
        ++out.checks;
        if (ok) {
            out.lines.push_back("ok " + label);
        } else {
            ++out.violations;
            out.lines.push_back("VIOLATION " + label + ": " + detail);
        }
    }

    // runs f and treats any exception as a violation of this check
    template <typename F>
    void guarded(const std::string& label, F&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            ++out.checks;
            ++out.violations;
            out.lines.push_back("VIOLATION " + label + ": " + e.what());
        }
    }
};

std::string num(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

CMat random_complex(int d, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat A(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = cplx(g(rng), g(rng));
    return A;
}

} // namespace

ValidationOutcome run_validation() {
    Recorder r;
    ModelParams p = fock_point();

    // --- every correction channel is trace preserving -----------------------
    r.guarded("kraus_cptp", [&] {
        double worst = completeness_error(three_qubit_correction());
        for (int s : {3, 5, 7}) {
            worst = std::max(worst, completeness_error(majority_correction(s)));
            worst = std::max(worst, completeness_error(collective_correction(s)));
        }
        r.check(worst <= tol::kraus_complete, "kraus_cptp (7 channels)",
                "completeness deviation " + num(worst));
    });

    // --- every propagator is unitary ----------------------------------------
    r.guarded("propagator_unitarity", [&] {
        double worst = 0.0;
        for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
            CMat u = method1::collective_propagator(t, p).matrix;
            worst = std::max(worst, (u.adjoint() * u - CMat::Identity(4, 4)).cwiseAbs().maxCoeff());
        }
        ModelParams small = p;
        small.field_init = FieldInit::fock(5);
        small = small.resolved();
        EigenDecomposition ed = hermitian_eig(build_collective_hamiltonian(small));
        Index d = small.dims(Basis::Collective).total();
        for (double t : {1e-3, 0.3}) {
            CMat u = unitary_from_eig(ed, t);
            worst = std::max(worst, (u.adjoint() * u - CMat::Identity(d, d)).cwiseAbs().maxCoeff());
        }
        r.check(worst <= tol::unitary, "propagator_unitarity",
                "unitarity deviation " + num(worst));
    });

    // --- closed-form reduced states are valid densities ---------------------
    r.guarded("method1_densities", [&] {
        for (double t : {0.0, 0.01, 0.1, 0.5, 2.0})
            assert_density(method1::uncorrected_entries(t, p), "method1 uncorrected");
        for (auto [eta, eps] : std::vector<std::pair<long, double>>{
                 {0, 0.01}, {10, 0.01}, {100, 0.01}, {40, 0.005}}) {
            for (double tau : {0.0, 0.003})
                assert_density(method1::corrected_density(eta, eps, tau, p), "method1 corrected");
        }
        r.check(true, "method1_densities", "");
    });

    r.guarded("method2_states", [&] {
        double worst_norm = 0.0;
        for (auto [eta, eps] : std::vector<std::pair<long, double>>{
                 {0, 0.01}, {1, 0.01}, {50, 0.01}, {400, 0.02}, {2000, 0.005}}) {
            method2::CorrectedState cs = method2::corrected_state(eta, eps, p.s, p);
            assert_density(cs.rho, "method2 corrected");
            worst_norm = std::max(worst_norm, cs.bloch.tail(3).norm());
        }
        r.check(worst_norm <= 1.0 + tol::bloch_excess, "method2_states",
                "Bloch norm " + num(worst_norm));
    });

    // --- the one-interval transfer matrix is block diagonal (1 + 3x3) -------
    r.guarded("transfer_block_structure", [&] {
        double worst = 0.0;
        for (double eps : {1e-3, 0.01, 0.05}) {
            Eigen::Matrix4d v = method2::total_transfer(eps, 3, p).matrix;
            for (int i = 1; i < 4; ++i) {
                worst = std::max(worst, std::fabs(v(0, i)));
                worst = std::max(worst, std::fabs(v(i, 0)));
            }
            worst = std::max(worst, std::fabs(v(0, 0) - 1.0));
        }
        r.check(worst <= 1e-10, "transfer_block_structure",
                "off-block magnitude " + num(worst));
    });

    // --- exact trajectories stay physical ------------------------------------
    r.guarded("exact_trajectories", [&] {
        ModelParams small = p;
        small.field_init = FieldInit::fock(4);
        small.n_max = 30;
        exact_sim::QecSchedule sc;
        sc.interval = 0.05;
        exact_sim::Trajectory corr = exact_sim::simulate(small, sc, {0.1, 0.25});

        ModelParams mid = p;
        mid.field_init = FieldInit::fock(10);
        exact_sim::Trajectory unc = exact_sim::simulate(mid, std::nullopt, {0.3, 1.0});

        bool ok = true;
        std::string detail;
        for (const exact_sim::Trajectory* tr : {&corr, &unc}) {
            for (std::size_t i = 0; i < tr->times.size(); ++i) {
                if (!(tr->qfi[i] >= 0.0)) { ok = false; detail = "negative QFI"; }
                if (tr->code_population[i] < -1e-9 || tr->code_population[i] > 1.0 + 1e-9) {
                    ok = false;
                    detail = "population " + num(tr->code_population[i]);
                }
                if (std::abs(tr->corner_coherence[i]) > 0.5 + tol::corner_band) {
                    ok = false;
                    detail = "corner " + num(std::abs(tr->corner_coherence[i]));
                }
            }
        }
        r.check(ok, "exact_trajectories", detail);
    });

    // --- two independent QFI computations agree ------------------------------
    r.guarded("qfi_oracle_agreement", [&] {
        std::mt19937 rng(20240811);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            CMat A = random_complex(4, rng);
            DensityMatrix rho0 = A * A.adjoint();
            rho0 /= rho0.trace().real();
            CMat B = random_complex(4, rng);
            CMat G = 0.5 * (B + B.adjoint());
            EigenDecomposition ge = hermitian_eig(G);

            DensityFamily fam = [&](double th) {
                CMat u = unitary_from_eig(ge, th);
                return DensityMatrix(u * rho0 * u.adjoint());
            };
            double th0 = 0.3;
            double f1 = qfi_spectral(fam, th0).value;

            CMat u0 = unitary_from_eig(ge, th0);
            DensityMatrix rc = u0 * rho0 * u0.adjoint();
            CMat drho = cplx(0.0, -1.0) * (G * rc - rc * G);
            double f2 = sld_oracle(rc, drho);
            worst = std::max(worst, std::fabs(f1 - f2) / std::max(f2, 1e-12));
        }
        r.check(worst <= 1e-6, "qfi_oracle_agreement (20 random families)",
                "relative deviation " + num(worst));
    });

    // --- closed-form diagonal vs bit-pattern enumeration ---------------------
    r.guarded("diagonal_brute_force", [&] {
        double worst = 0.0;
        for (int s : {3, 5}) {
            for (double tau : {0.07, 0.3}) {
                double x = method1::chi(tau, p);
                std::vector<double> brute(s + 1, 0.0);
                for (int pattern = 0; pattern < (1 << s); ++pattern) {
                    int w = 0;
                    for (int b = 0; b < s; ++b) w += (pattern >> b) & 1;
                    double prob = std::pow(x, w) * std::pow(1.0 - x, s - w);
                    brute[w] += 0.5 * prob;         // flips applied to all-ground
                    brute[s - w] += 0.5 * prob;     // flips applied to all-excited
                }
                std::vector<double> closed = method1::s_atom_diagonal(s, tau, p);
                for (int k = 0; k <= s; ++k)
                    worst = std::max(worst, std::fabs(brute[k] - closed[k]));
            }
        }
        r.check(worst <= 1e-12, "diagonal_brute_force (s = 3,5)",
                "deviation " + num(worst));
    });

    // --- the two 3-atom correction constructions are the same map ------------
    r.guarded("correction_exhaustive", [&] {
        KrausSet maj = majority_correction(3);
        KrausSet expl = three_qubit_correction();
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                DensityMatrix unit = DensityMatrix::Zero(8, 8);
                unit(i, j) = 1.0;
                worst = std::max(
                    worst,
                    (apply_channel(unit, maj) - apply_channel(unit, expl)).cwiseAbs().maxCoeff());
            }
        }
        r.check(worst <= 1e-12, "correction_exhaustive (64 basis units)",
                "deviation " + num(worst));
    });

    return r.out;
}

} // namespace tcqfi
