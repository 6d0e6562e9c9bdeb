#pragma once

#include <string>
#include <vector>

#include "tcqfi/model.hpp"
#include "tcqfi/constants.hpp"

namespace tcqfi {

enum class Experiment { TimeSweep, IntervalSweep, AtomSweep, Validate };
enum class Pipeline { Exact, Method1, Method2 };

std::string to_string(Experiment e);
std::string to_string(Pipeline p);

// One batch run: which experiment, the physical parameters, the correction
// schedule(s), the sweep grid, and the output destination. Parsed from a flat
// key=value text file ('#' starts a comment); unknown or duplicate keys are
// rejected by name.
struct RunConfig {
    Experiment experiment = Experiment::TimeSweep;
    ModelParams params;

    // correction intervals; empty means uncorrected evolution only.
    // time_sweep and atom_sweep accept at most one, interval_sweep several.
    std::vector<double> intervals;

    std::vector<double> times;   // readout grid for time/interval sweeps
    std::vector<int> atoms_list; // atom counts for atom_sweep
    double readout_time = 0.0;   // fixed readout time for atom_sweep

    std::vector<Pipeline> pipelines;
    std::string output_csv;

    double fd_step = 0.0;             // 0 = per-call default
    double cutoff = tol::qfi_cutoff;  // QFI support cutoff
    int threads = 0;                  // worker pool size; 0 = hardware default

    void validate() const;
};

RunConfig parse_config_file(const std::string& path);
// origin only labels error messages
RunConfig parse_config_text(const std::string& text, const std::string& origin);

// Full resolved echo (every field, defaults filled in, keys sorted), used as
// the run manifest. Deterministic: no timestamps, fixed number formatting.
std::string manifest_text(const RunConfig& c);

} // namespace tcqfi
