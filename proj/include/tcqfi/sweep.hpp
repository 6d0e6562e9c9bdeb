#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tcqfi/config.hpp"

namespace tcqfi {

// One emitted data point. `x` is the readout time for time/interval sweeps
// and the atom count for atom sweeps; `heisenberg_reference` is s^2 t^2 at
// the row's readout time, always populated for comparison plots.
struct SweepRow {
    std::string series;
    double x = 0.0;
    double qfi = 0.0;
    double code_population = 0.0;
    double corner_magnitude = 0.0;
    double heisenberg_reference = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string csv_path;
    std::string manifest_path;
};

// Deterministic CSV bytes for the rows: one '#' parameter-echo line, a header
// row, then 17-significant-digit numeric rows, each newline-terminated.
std::string csv_text(const RunConfig& c, const std::vector<SweepRow>& rows);

// Runs the configured experiment. Grid points are dispatched to a worker
// pool (config `threads`, 0 = hardware parallelism); row order in the CSV is
// fixed by the config, not by completion order, so re-runs are bit-identical.
// Progress is reported per finished task; the CSV is flushed incrementally as
// its prefix completes. The validate experiment prints its battery lines and
// throws NumericError if any invariant is violated.
SweepResult run(const RunConfig& c, std::ostream& progress);

} // namespace tcqfi
