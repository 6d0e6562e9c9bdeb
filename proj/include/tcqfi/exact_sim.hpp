#pragma once

#include <optional>
#include <vector>

#include "tcqfi/model.hpp"
#include "tcqfi/types.hpp"

// Ground-truth trajectories: dense evolution of the joint atom-field state
// (full product or collective symmetric basis), periodic correction of the
// atomic factor, partial trace over the field, and Fisher information of the
// reduced state along a time grid.
namespace tcqfi::exact_sim {

// One point of a periodic correction protocol: total time t factors as
// corrections * interval + residual with residual in [0, interval).
struct QecSchedule {
    double interval = 0.0; // time between corrections, > 0
    long corrections = 0;  // completed correction count, >= 0
    double residual = 0.0; // time elapsed since the last correction

    double total_time() const { return corrections * interval + residual; }

    // Factor a time against a correction interval.  Times within 1e-9
    // (relative) of an exact multiple snap to the completed correction.
    static QecSchedule factor(double eps, double t);
};

// Observables recorded along a simulated time grid.  All lists share the
// grid's length.  code_population is the total weight on the two codewords
// (all atoms ground / all excited); corner_coherence is the reduced-state
// matrix element between them.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> qfi;
    std::vector<double> code_population;
    std::vector<cplx> corner_coherence;
};

// Evolve the initial codeword superposition (times the configured field
// state) along t_grid, applying the majority-vote correction to the atomic
// factor after each full interval of sched (none = uncorrected).  Only
// sched->interval is read; the correction count is refactored per grid
// point.  The Fisher information is taken with respect to the detuning,
// varying omega_a at fixed omega_c.  The grid must be ascending and
// nonnegative.  Throws NumericError if population leaks into the top field
// level beyond the truncation guard.
Trajectory simulate(const ModelParams& p, const std::optional<QecSchedule>& sched,
                    const std::vector<double>& t_grid,
                    Basis basis = Basis::Collective);

// Fraction of the state driven out of the codewords per unit time across one
// interval, measured from the evolved (not yet corrected) state at eps.
double error_rate_empirical(const ModelParams& p, double eps);

// Standard grids: 200 points over [0, 20] and over [0, 10].
std::vector<double> default_grid_long();
std::vector<double> default_grid_short();

} // namespace tcqfi::exact_sim
