#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tcqfi/config.hpp"
#include "tcqfi/fit.hpp"
#include "tcqfi/sweep.hpp"
#include "tcqfi/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int run_simulate(const std::string& config_path, int threads_override) {
    tcqfi::RunConfig cfg = tcqfi::parse_config_file(config_path);
    if (threads_override >= 0) cfg.threads = threads_override;
    tcqfi::SweepResult res = tcqfi::run(cfg, std::cout);
    if (!res.csv_path.empty()) {
        std::cout << "wrote " << res.csv_path << " (" << res.rows.size() << " rows) and "
                  << res.manifest_path << "\n";
    }
    return kExitOk;
}

int run_validate() {
    tcqfi::ValidationOutcome v = tcqfi::run_validation();
    for (const std::string& line : v.lines) std::cout << line << "\n";
    std::cout << v.checks << " checks, " << v.violations << " violations\n";
    return v.passed() ? kExitOk : kExitNumeric;
}

int run_fit(const std::string& input_path) {
    auto pts = tcqfi::read_xy_csv(input_path);
    tcqfi::PowerLawFit f = tcqfi::fit_power_law(pts);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "exponent=%.17g amplitude=%.17g r_squared=%.17g\n",
                  f.exponent, f.amplitude, f.r_squared);
    std::cout << buf;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tavis-Cummings QFI sweeps: exact simulation plus two "
                 "large-photon-number pipelines"};
    app.require_subcommand(1);

    std::string config_path;
    int threads_override = -1;
    CLI::App* sim = app.add_subcommand("simulate", "run a sweep described by a config file");
    sim->add_option("--config", config_path, "key=value config file")->required();
    sim->add_option("--threads", threads_override,
                    "worker pool size (overrides the config; 0 = hardware)");

    CLI::App* val = app.add_subcommand("validate", "run the structural-invariant battery");

    std::string fit_input;
    CLI::App* fit = app.add_subcommand("fit", "power-law fit of the first two CSV columns");
    fit->add_option("--input", fit_input, "CSV file of (x, y) points")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) return run_simulate(config_path, threads_override);
        if (val->parsed()) return run_validate();
        if (fit->parsed()) return run_fit(fit_input);
    } catch (const tcqfi::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tcqfi::DimensionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tcqfi::NumericError& e) {
        std::cerr << "numerical invariant violated: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
