#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "doctest.h"
#include "tcqfi/exact_sim.hpp"
#include "tcqfi/model.hpp"

using namespace tcqfi;
using exact_sim::QecSchedule;
using exact_sim::Trajectory;

namespace {

// the standard Fock-field working point: 3 atoms, detuning 2, coupling 2, n=99
ModelParams fig_params() {
    ModelParams p;
    p.s = 3;
    p.omega_c = 2.5;
    p.omega_a = 4.5;
    p.Omega = 2.0;
    p.field_init = FieldInit::fock(99);
    return p;
}

} // namespace

TEST_CASE("schedule factoring: counts, residuals, and rejections") {
    QecSchedule a = QecSchedule::factor(0.1, 1.0);
    CHECK(a.interval == 0.1);
    CHECK(a.corrections == 10);
    CHECK(a.residual == 0.0); // clamped, not a tiny negative remainder
    CHECK(a.total_time() == doctest::Approx(1.0).epsilon(1e-12));

    QecSchedule b = QecSchedule::factor(0.1, 0.25);
    CHECK(b.corrections == 2);
    CHECK(b.residual == doctest::Approx(0.05).epsilon(1e-9));

    QecSchedule c = QecSchedule::factor(0.1, 0.05);
    CHECK(c.corrections == 0);
    CHECK(c.residual == doctest::Approx(0.05).epsilon(1e-12));

    QecSchedule d = QecSchedule::factor(0.1, 0.0);
    CHECK(d.corrections == 0);
    CHECK(d.residual == 0.0);

    // 0.3/0.1 sits just below 3 in floating point; the factoring must not
    // emit 2 corrections plus a residual of almost a full interval
    QecSchedule e = QecSchedule::factor(0.1, 0.3);
    CHECK(e.corrections == 3);
    CHECK(e.residual == 0.0);

    CHECK_THROWS_AS(QecSchedule::factor(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(QecSchedule::factor(-0.1, 1.0), ValidationError);
    CHECK_THROWS_AS(QecSchedule::factor(std::nan(""), 1.0), ValidationError);
    CHECK_THROWS_AS(QecSchedule::factor(0.1, -1.0), ValidationError);
    CHECK_THROWS_AS(
        QecSchedule::factor(0.1, std::numeric_limits<double>::infinity()),
        ValidationError);
}

TEST_CASE("zero coupling: pure dephasing gives QFI = s^2 t^2 exactly") {
    ModelParams p = fig_params();
    p.Omega = 0.0;
    p.field_init = FieldInit::fock(2);

    Trajectory tr = exact_sim::simulate(p, std::nullopt, {0.5, 3.0, 17.0});
    REQUIRE(tr.qfi.size() == 3);
    CHECK(tr.qfi[0] == doctest::Approx(2.25).epsilon(1e-6));
    CHECK(tr.qfi[1] == doctest::Approx(81.0).epsilon(1e-6));
    CHECK(tr.qfi[2] == doctest::Approx(2601.0).epsilon(1e-6));
    for (double pop : tr.code_population) {
        CHECK(pop == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const cplx& corner : tr.corner_coherence) {
        CHECK(std::abs(corner) == doctest::Approx(0.5).epsilon(1e-9));
    }

    ModelParams p5 = p;
    p5.s = 5;
    Trajectory tr5 = exact_sim::simulate(p5, std::nullopt, {1.0});
    CHECK(tr5.qfi[0] == doctest::Approx(25.0).epsilon(1e-6));
}

TEST_CASE("short-time onset approaches the s^2 t^2 envelope") {
    ModelParams p = fig_params();
    Trajectory tr = exact_sim::simulate(p, std::nullopt, {0.002, 0.005, 0.01});
    REQUIRE(tr.qfi.size() == 3);

    double r1 = tr.qfi[0] / (0.002 * 0.002);
    double r2 = tr.qfi[1] / (0.005 * 0.005);
    double r3 = tr.qfi[2] / (0.01 * 0.01);

    // the deficit against 9 shrinks as t -> 0 (flip probability ~ t^2)
    CHECK(std::abs(r1 - 9.0) <= 9.0 * 0.002);
    CHECK(std::abs(r2 - 9.0) <= 9.0 * 0.008);
    CHECK(std::abs(r3 - 9.0) <= 9.0 * 0.030);
    CHECK(std::abs(r1 - 9.0) < std::abs(r2 - 9.0));
    CHECK(std::abs(r2 - 9.0) < std::abs(r3 - 9.0));

    // frozen value, cross-checked against an independent dense implementation
    CHECK(r3 == doctest::Approx(8.793153).epsilon(1e-4));

    // with a tamer field (n = 10) the envelope holds to 1% at t = 0.01
    ModelParams gentle = fig_params();
    gentle.field_init = FieldInit::fock(10);
    Trajectory trg = exact_sim::simulate(gentle, std::nullopt, {0.01});
    double rg = trg.qfi[0] / 1e-4;
    CHECK(std::abs(rg - 9.0) <= 9.0 * 0.01);
    CHECK(rg == doctest::Approx(8.977974).epsilon(1e-4));
}

TEST_CASE("uncorrected evolution falls far below the s^2 t^2 envelope") {
    ModelParams p = fig_params();
    Trajectory tr = exact_sim::simulate(p, std::nullopt, {0.0, 0.01, 0.3, 5.0});
    REQUIRE(tr.qfi.size() == 4);

    // t = 0: pure initial state, no parameter dependence yet
    CHECK(tr.qfi[0] <= 1e-8);
    CHECK(tr.code_population[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(tr.corner_coherence[0]) == doctest::Approx(0.5).epsilon(1e-12));

    // inside the first flip cycle the envelope is still tracked...
    CHECK(tr.qfi[1] / (9.0 * 1e-4) > 0.95);
    // ...after it, the QFI keeps growing in absolute terms but the ratio
    // to s^2 t^2 collapses
    CHECK(tr.qfi[2] > tr.qfi[1]);
    CHECK(tr.qfi[2] / (9.0 * 0.09) < 0.01);
    CHECK(tr.qfi[3] / (9.0 * 25.0) < 0.002);

    // frozen values, cross-checked against an independent dense implementation
    CHECK(tr.qfi[2] == doctest::Approx(0.003774).epsilon(2e-3));
    CHECK(tr.qfi[3] == doctest::Approx(0.269954).epsilon(2e-3));
    CHECK(tr.code_population[2] == doctest::Approx(0.946360).epsilon(1e-4));
    CHECK(std::abs(tr.corner_coherence[2]) == doctest::Approx(0.473097).epsilon(1e-4));

    CHECK(tr.times == std::vector<double>{0.0, 0.01, 0.3, 5.0});
    CHECK(tr.code_population.size() == 4);
    CHECK(tr.corner_coherence.size() == 4);
}

TEST_CASE("corrected runs agree between collective and product bases") {
    ModelParams p = fig_params();
    p.field_init = FieldInit::fock(4);
    p.n_max = 30; // periodic correction pumps the field up; leave headroom

    QecSchedule sched;
    sched.interval = 0.05;
    std::vector<double> grid{0.1, 0.25};

    Trajectory coll = exact_sim::simulate(p, sched, grid, Basis::Collective);
    Trajectory full = exact_sim::simulate(p, sched, grid, Basis::Full);
    REQUIRE(coll.qfi.size() == full.qfi.size());
    for (std::size_t i = 0; i < coll.qfi.size(); ++i) {
        CHECK(coll.qfi[i] ==
              doctest::Approx(full.qfi[i]).epsilon(1e-6));
        CHECK(coll.code_population[i] ==
              doctest::Approx(full.code_population[i]).epsilon(1e-9));
        CHECK(std::abs(coll.corner_coherence[i] - full.corner_coherence[i]) <=
              1e-9);
    }
}

TEST_CASE("more frequent correction never hurts at fixed total time") {
    ModelParams p = fig_params();
    p.field_init = FieldInit::fock(20);
    p.n_max = 45;

    QecSchedule fine;
    fine.interval = 0.05;
    QecSchedule coarse;
    coarse.interval = 0.1;
    std::vector<double> grid{0.5, 1.0};

    Trajectory tf = exact_sim::simulate(p, fine, grid);
    Trajectory tc = exact_sim::simulate(p, coarse, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(tf.qfi[i] >= tc.qfi[i] - 1e-6);
    }

    // frozen values, cross-checked against an independent dense implementation
    CHECK(tf.qfi[0] == doctest::Approx(0.107170).epsilon(2e-3));
    CHECK(tf.qfi[1] == doctest::Approx(0.017786).epsilon(2e-3));
    CHECK(tc.qfi[0] == doctest::Approx(0.006094).epsilon(2e-3));
}

TEST_CASE("a schedule with no corrections due matches the uncorrected run") {
    ModelParams p = fig_params();
    p.field_init = FieldInit::fock(10);

    QecSchedule idle;
    idle.interval = 50.0; // longer than any grid time: zero corrections fire
    std::vector<double> grid{0.3, 1.0};

    Trajectory a = exact_sim::simulate(p, idle, grid);
    Trajectory b = exact_sim::simulate(p, std::nullopt, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.qfi[i] == doctest::Approx(b.qfi[i]).epsilon(1e-10));
        CHECK(a.code_population[i] ==
              doctest::Approx(b.code_population[i]).epsilon(1e-12));
        CHECK(std::abs(a.corner_coherence[i] - b.corner_coherence[i]) <= 1e-12);
    }
}

TEST_CASE("empirical deviation rate matches (s/4)(n+1) Omega^2 eps") {
    ModelParams p = fig_params();

    double r3 = exact_sim::error_rate_empirical(p, 1e-3);
    CHECK(r3 / 1e-3 == doctest::Approx(300.0).epsilon(0.05));
    CHECK(r3 / 1e-3 == doctest::Approx(298.460).epsilon(1e-3));

    double r3c = exact_sim::error_rate_empirical(p, 0.01);
    CHECK(r3c / 0.01 == doctest::Approx(300.0).epsilon(0.05));

    // linear in the atom count at fixed interval
    ModelParams p5 = p;
    p5.s = 5;
    ModelParams p7 = p;
    p7.s = 7;
    double per3 = r3 / 1e-3 / 3.0;
    double per5 = exact_sim::error_rate_empirical(p5, 1e-3) / 1e-3 / 5.0;
    double per7 = exact_sim::error_rate_empirical(p7, 1e-3) / 1e-3 / 7.0;
    CHECK(per5 == doctest::Approx(per3).epsilon(1e-3));
    CHECK(per7 == doctest::Approx(per3).epsilon(1e-3));

    ModelParams off = p;
    off.Omega = 0.0;
    CHECK(exact_sim::error_rate_empirical(off, 1e-3) <= 1e-12);

    CHECK_THROWS_AS(exact_sim::error_rate_empirical(p, 0.0), ValidationError);
    CHECK_THROWS_AS(exact_sim::error_rate_empirical(p, -0.1), ValidationError);
}

TEST_CASE("truncation guard fires when correction pumps past the ceiling") {
    ModelParams p = fig_params();
    p.field_init = FieldInit::fock(4); // default ceiling: n + s + 3 = 10

    QecSchedule sched;
    sched.interval = 0.05;
    CHECK_THROWS_AS(exact_sim::simulate(p, sched, {0.5}), NumericError);
}

TEST_CASE("grid and schedule validation") {
    ModelParams p = fig_params();
    p.field_init = FieldInit::fock(2);

    CHECK_THROWS_AS(exact_sim::simulate(p, std::nullopt, {0.5, 0.2}),
                    ValidationError);
    CHECK_THROWS_AS(exact_sim::simulate(p, std::nullopt, {-0.1, 0.2}),
                    ValidationError);
    CHECK_THROWS_AS(exact_sim::simulate(p, std::nullopt, {0.1, std::nan("")}),
                    ValidationError);

    QecSchedule bad;
    bad.interval = 0.0;
    CHECK_THROWS_AS(exact_sim::simulate(p, bad, {0.1}), ValidationError);
    bad.interval = -1.0;
    CHECK_THROWS_AS(exact_sim::simulate(p, bad, {0.1}), ValidationError);

    // a coherent field works through the same entry point
    ModelParams coh = fig_params();
    coh.field_init = FieldInit::coherent(cplx(1.0, 0.0));
    Trajectory tr = exact_sim::simulate(coh, std::nullopt, {0.1});
    CHECK(tr.qfi[0] >= 0.0);
    CHECK(tr.code_population[0] >= 0.0);
    CHECK(tr.code_population[0] <= 1.0 + 1e-9);
}

TEST_CASE("bundled time grids are ascending and span the documented ranges") {
    std::vector<double> lg = exact_sim::default_grid_long();
    std::vector<double> sg = exact_sim::default_grid_short();
    REQUIRE(lg.size() == 200);
    REQUIRE(sg.size() == 200);
    CHECK(lg.front() == 0.0);
    CHECK(sg.front() == 0.0);
    CHECK(lg.back() == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(sg.back() == doctest::Approx(10.0).epsilon(1e-12));
    for (std::size_t i = 1; i < lg.size(); ++i) CHECK(lg[i] > lg[i - 1]);
}
