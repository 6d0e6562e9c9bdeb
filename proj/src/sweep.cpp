#include "tcqfi/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "tcqfi/exact_sim.hpp"
#include "tcqfi/method1.hpp"
#include "tcqfi/method2.hpp"
#include "tcqfi/qfi.hpp"
#include "tcqfi/validate.hpp"

namespace tcqfi {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

std::string x_column_name(Experiment e) {
    return e == Experiment::AtomSweep ? "s" : "t";
}

double qfi_step(const RunConfig& c, double delta0) {
    return c.fd_step > 0.0 ? c.fd_step : default_fd_step(delta0);
}

// QFI of a reduced-state family over the detuning, holding omega_c fixed
double qfi_of_family(const RunConfig& c, const ModelParams& p,
                     const std::function<DensityMatrix(const ModelParams&)>& state_at) {
    DensityFamily fam = [&](double d) {
        ModelParams q = p;
        q.omega_a = q.omega_c + d;
        return state_at(q);
    };
    double d0 = p.delta();
    return qfi_spectral(fam, d0, qfi_step(c, d0), c.cutoff).value;
}

void fill_method1_point(const RunConfig& c, const ModelParams& p, double t,
                        std::optional<double> interval, SweepRow& row) {
    if (interval) {
        exact_sim::QecSchedule sc = exact_sim::QecSchedule::factor(*interval, t);
        long eta = sc.corrections;
        double tau = sc.residual;
        double eps = *interval;
        row.qfi = qfi_of_family(c, p, [&](const ModelParams& q) {
            return method1::corrected_density(eta, eps, tau, q);
        });
        DensityMatrix rho = method1::corrected_density(eta, eps, tau, p);
        row.code_population = rho(0, 0).real() + rho(p.s, p.s).real();
        row.corner_magnitude = std::abs(rho(0, p.s));
    } else {
        row.qfi = qfi_of_family(
            c, p, [&](const ModelParams& q) { return method1::uncorrected_entries(t, q); });
        DensityMatrix rho = method1::uncorrected_entries(t, p);
        row.code_population = rho(0, 0).real() + rho(p.s, p.s).real();
        row.corner_magnitude = std::abs(rho(0, p.s));
    }
}

// method2 evaluates at an integer number of intervals; grid times are
// snapped to the nearest multiple and the row records the snapped time
void fill_method2_point(const RunConfig& c, const ModelParams& p, double t, double eps,
                        int s, SweepRow& row) {
    long eta = std::lround(t / eps);
    double t_eval = static_cast<double>(eta) * eps;
    if (c.experiment != Experiment::AtomSweep) row.x = t_eval;
    row.heisenberg_reference = static_cast<double>(s) * s * t_eval * t_eval;
    row.qfi = qfi_of_family(c, p, [&](const ModelParams& q) {
        return method2::corrected_bloch(eta, eps, s, q);
    });
    method2::CorrectedState cs = method2::corrected_state(eta, eps, s, p);
    row.code_population = cs.pre_renormalization_trace;
    row.corner_magnitude = std::abs(cs.rho(0, 1));
}

struct TaskList {
    std::vector<std::function<void()>> work;
    std::vector<std::string> labels;
    std::vector<int> first_row; // rows[first_row[i]..] are filled by task i

    void add(const std::string& label, int first, std::function<void()> fn) {
        labels.push_back(label);
        first_row.push_back(first);
        work.push_back(std::move(fn));
    }
};

} // namespace

std::string csv_text(const RunConfig& c, const std::vector<SweepRow>& rows) {
    std::string out = "# ";
    {
        std::string mf = manifest_text(c);
        for (char& ch : mf)
            if (ch == '\n') ch = ' ';
        while (!mf.empty() && mf.back() == ' ') mf.pop_back();
        out += mf;
    }
    out += "\n";
    out += "series," + x_column_name(c.experiment) +
           ",qfi,code_population,corner_magnitude,heisenberg_reference\n";
    for (const SweepRow& r : rows) {
        out += r.series;
        out += ",";
        out += fmt17(r.x);
        out += ",";
        out += fmt17(r.qfi);
        out += ",";
        out += fmt17(r.code_population);
        out += ",";
        out += fmt17(r.corner_magnitude);
        out += ",";
        out += fmt17(r.heisenberg_reference);
        out += "\n";
    }
    return out;
}

SweepResult run(const RunConfig& c, std::ostream& progress) {
    c.validate();

    if (c.experiment == Experiment::Validate) {
        ValidationOutcome v = run_validation();
        for (const std::string& line : v.lines) progress << line << "\n";
        progress << v.checks << " checks, " << v.violations << " violations\n";
        progress.flush();
        if (!v.passed())
            throw NumericError("validation battery reported " +
                               std::to_string(v.violations) + " violation(s)");
        return SweepResult{};
    }

    ModelParams base = c.params.resolved();
    int s = base.s;

    std::vector<SweepRow> rows;
    TaskList tasks;

    auto heis = [&](double t) { return static_cast<double>(s) * s * t * t; };

    // --- build the fixed row skeleton and the task list ---------------------
    auto add_series_rows = [&](const std::string& series, const std::vector<double>& xs,
                               double t_for_heis_scale) {
        int first = static_cast<int>(rows.size());
        for (double x : xs) {
            SweepRow r;
            r.series = series;
            r.x = x;
            r.heisenberg_reference =
                (c.experiment == Experiment::AtomSweep)
                    ? x * x * t_for_heis_scale * t_for_heis_scale
                    : heis(x);
            rows.push_back(r);
        }
        return first;
    };

    for (Pipeline pl : c.pipelines) {
        switch (c.experiment) {
            case Experiment::TimeSweep: {
                std::optional<double> interval;
                if (!c.intervals.empty()) interval = c.intervals.front();

                if (pl == Pipeline::Exact) {
                    int f0 = add_series_rows("exact", c.times, 0.0);
                    tasks.add("exact", f0, [=, &rows, &c] {
                        exact_sim::Trajectory tr =
                            exact_sim::simulate(c.params, std::nullopt, c.times);
                        for (std::size_t i = 0; i < c.times.size(); ++i) {
                            rows[f0 + i].qfi = tr.qfi[i];
                            rows[f0 + i].code_population = tr.code_population[i];
                            rows[f0 + i].corner_magnitude = std::abs(tr.corner_coherence[i]);
                        }
                    });
                    if (interval) {
                        int f1 = add_series_rows("exact_qec", c.times, 0.0);
                        double eps = *interval;
                        tasks.add("exact_qec", f1,
                                  [=, &rows, &c] {
                                      exact_sim::QecSchedule sc;
                                      sc.interval = eps;
                                      exact_sim::Trajectory tr =
                                          exact_sim::simulate(c.params, sc, c.times);
                                      for (std::size_t i = 0; i < c.times.size(); ++i) {
                                          rows[f1 + i].qfi = tr.qfi[i];
                                          rows[f1 + i].code_population = tr.code_population[i];
                                          rows[f1 + i].corner_magnitude =
                                              std::abs(tr.corner_coherence[i]);
                                      }
                                  });
                    }
                } else if (pl == Pipeline::Method1) {
                    int f0 = add_series_rows("method1", c.times, 0.0);
                    for (std::size_t i = 0; i < c.times.size(); ++i) {
                        double t = c.times[i];
                        tasks.add("method1 t=" + fmt_short(t), f0 + static_cast<int>(i),
                                  [=, &rows, &c] {
                                      fill_method1_point(c, base, t, std::nullopt,
                                                         rows[f0 + i]);
                                  });
                    }
                    if (interval) {
                        int f1 = add_series_rows("method1_qec", c.times, 0.0);
                        for (std::size_t i = 0; i < c.times.size(); ++i) {
                            double t = c.times[i];
                            tasks.add("method1_qec t=" + fmt_short(t), f1 + static_cast<int>(i),
                                      [=, &rows, &c] {
                                          fill_method1_point(c, base, t, interval,
                                                             rows[f1 + i]);
                                      });
                        }
                    }
                } else { // Method2, corrected only (validated: interval present)
                    double eps = c.intervals.front();
                    int f1 = add_series_rows("method2_qec", c.times, 0.0);
                    for (std::size_t i = 0; i < c.times.size(); ++i) {
                        double t = c.times[i];
                        tasks.add("method2_qec t=" + fmt_short(t), f1 + static_cast<int>(i),
                                  [=, &rows, &c] {
                                      fill_method2_point(c, base, t, eps, s, rows[f1 + i]);
                                  });
                    }
                }
                break;
            }
            case Experiment::IntervalSweep: {
                for (double eps : c.intervals) {
                    std::string tag = "_qec_eps" + fmt_short(eps);
                    if (pl == Pipeline::Exact) {
                        int f0 = add_series_rows("exact" + tag, c.times, 0.0);
                        tasks.add("exact" + tag, f0,
                                  [=, &rows, &c] {
                                      exact_sim::QecSchedule sc;
                                      sc.interval = eps;
                                      exact_sim::Trajectory tr =
                                          exact_sim::simulate(c.params, sc, c.times);
                                      for (std::size_t i = 0; i < c.times.size(); ++i) {
                                          rows[f0 + i].qfi = tr.qfi[i];
                                          rows[f0 + i].code_population = tr.code_population[i];
                                          rows[f0 + i].corner_magnitude =
                                              std::abs(tr.corner_coherence[i]);
                                      }
                                  });
                    } else if (pl == Pipeline::Method1) {
                        int f0 = add_series_rows("method1" + tag, c.times, 0.0);
                        for (std::size_t i = 0; i < c.times.size(); ++i) {
                            double t = c.times[i];
                            tasks.add("method1" + tag + " t=" + fmt_short(t),
                                      f0 + static_cast<int>(i), [=, &rows, &c] {
                                          fill_method1_point(c, base, t,
                                                             std::optional<double>(eps),
                                                             rows[f0 + i]);
                                      });
                        }
                    } else {
                        int f0 = add_series_rows("method2" + tag, c.times, 0.0);
                        for (std::size_t i = 0; i < c.times.size(); ++i) {
                            double t = c.times[i];
                            tasks.add("method2" + tag + " t=" + fmt_short(t),
                                      f0 + static_cast<int>(i), [=, &rows, &c] {
                                          fill_method2_point(c, base, t, eps, s,
                                                             rows[f0 + i]);
                                      });
                        }
                    }
                }
                break;
            }
            case Experiment::AtomSweep: {
                double eps = c.intervals.front();
                double T = c.readout_time;
                std::vector<double> xs(c.atoms_list.begin(), c.atoms_list.end());
                std::string name = (pl == Pipeline::Exact)     ? "exact_qec"
                                   : (pl == Pipeline::Method1) ? "method1_qec"
                                                               : "method2_qec";
                int f0 = add_series_rows(name, xs, T);
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    int si = c.atoms_list[i];
                    tasks.add(name + " s=" + std::to_string(si), f0 + static_cast<int>(i),
                              [=, &rows, &c] {
                                  ModelParams q = base;
                                  q.s = si;
                                  q.n_max = -1; // re-derive the default for this atom count
                                  q = q.resolved();
                                  if (pl == Pipeline::Exact) {
                                      exact_sim::QecSchedule sc;
                                      sc.interval = eps;
                                      exact_sim::Trajectory tr =
                                          exact_sim::simulate(q, sc, {T});
                                      rows[f0 + i].qfi = tr.qfi[0];
                                      rows[f0 + i].code_population = tr.code_population[0];
                                      rows[f0 + i].corner_magnitude =
                                          std::abs(tr.corner_coherence[0]);
                                  } else if (pl == Pipeline::Method1) {
                                      fill_method1_point(c, q, T, std::optional<double>(eps),
                                                         rows[f0 + i]);
                                  } else {
                                      fill_method2_point(c, q, T, eps, si, rows[f0 + i]);
                                  }
                              });
                }
                break;
            }
            case Experiment::Validate:
                break;
        }
    }

    // --- output paths ---------------------------------------------------------
    SweepResult result;
    result.csv_path = c.output_csv;
    result.manifest_path = c.output_csv + ".manifest";
    {
        std::filesystem::path parent = std::filesystem::path(c.output_csv).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        std::ofstream mf(result.manifest_path, std::ios::trunc);
        if (!mf) throw ValidationError("cannot write manifest: " + result.manifest_path);
        mf << manifest_text(c);
    }

    // --- run the task list on a worker pool -----------------------------------
    std::vector<char> task_done(tasks.work.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::mutex mtx; // guards progress output, task_done, and the error slot
    std::exception_ptr first_error;
    std::size_t done_count = 0;

    auto flush_prefix = [&]() { // caller holds mtx
        // find how many rows are final (all tasks covering them are done)
        std::size_t rows_ready = rows.size();
        for (std::size_t ti = 0; ti < tasks.work.size(); ++ti) {
            if (!task_done[ti])
                rows_ready = std::min(rows_ready, static_cast<std::size_t>(tasks.first_row[ti]));
        }
        std::ofstream out(result.csv_path, std::ios::trunc);
        if (!out) throw ValidationError("cannot write CSV: " + result.csv_path);
        std::vector<SweepRow> ready(rows.begin(), rows.begin() + rows_ready);
        out << csv_text(c, ready);
    };

    auto worker = [&]() {
        while (!abort.load()) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.work.size()) return;
            try {
                tasks.work[i]();
                std::lock_guard<std::mutex> lk(mtx);
                task_done[i] = 1;
                ++done_count;
                progress << "[" << done_count << "/" << tasks.work.size() << "] "
                         << tasks.labels[i] << "\n";
                progress.flush();
                flush_prefix();
            } catch (...) {
                std::lock_guard<std::mutex> lk(mtx);
                if (!first_error) {
                    try {
                        std::rethrow_exception(std::current_exception());
                    } catch (const std::exception& e) {
                        first_error = std::make_exception_ptr(
                            NumericError("task '" + tasks.labels[i] + "': " + e.what()));
                    } catch (...) {
                        first_error = std::current_exception();
                    }
                }
                abort.store(true);
                return;
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t nthreads = c.threads > 0 ? static_cast<std::size_t>(c.threads)
                                         : (hw ? hw : 1);
    nthreads = std::min(nthreads, tasks.work.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // final write (identical bytes on re-run: row order is config-fixed)
    {
        std::lock_guard<std::mutex> lk(mtx);
        std::ofstream out(result.csv_path, std::ios::trunc);
        if (!out) throw ValidationError("cannot write CSV: " + result.csv_path);
        out << csv_text(c, rows);
    }

    // every emitted row satisfies the physicality bounds
    for (const SweepRow& r : rows) {
        if (!(r.qfi >= 0.0))
            throw NumericError("emitted row with negative QFI in series " + r.series);
        if (r.code_population < -1e-9 || r.code_population > 1.0 + 1e-9)
            throw NumericError("emitted row with code population " +
                               std::to_string(r.code_population) + " in series " + r.series);
    }

    result.rows = std::move(rows);
    return result;
}

} // namespace tcqfi
