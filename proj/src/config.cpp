#include "tcqfi/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace tcqfi {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw ValidationError(origin + ": " + msg);
}

double parse_double(const std::string& origin, const std::string& key, const std::string& v) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        fail(origin, "key '" + key + "': not a number: '" + v + "'");
    return x;
}

int parse_int(const std::string& origin, const std::string& key, const std::string& v) {
    char* end = nullptr;
    long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        fail(origin, "key '" + key + "': not an integer: '" + v + "'");
    return static_cast<int>(x);
}

std::vector<std::string> split_commas(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// consumed-key tracking so leftovers can be reported as unknown
struct KeyMap {
    std::map<std::string, std::string> kv;
    std::map<std::string, bool> used;
    std::string origin;

    bool has(const std::string& k) const { return kv.count(k) != 0; }
    std::string take(const std::string& k) {
        used[k] = true;
        return kv.at(k);
    }
};

} // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::TimeSweep: return "time_sweep";
        case Experiment::IntervalSweep: return "interval_sweep";
        case Experiment::AtomSweep: return "atom_sweep";
        case Experiment::Validate: return "validate";
    }
    return "?";
}

std::string to_string(Pipeline p) {
    switch (p) {
        case Pipeline::Exact: return "exact";
        case Pipeline::Method1: return "method1";
        case Pipeline::Method2: return "method2";
    }
    return "?";
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    KeyMap m;
    m.origin = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(origin, "line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(origin, "line " + std::to_string(lineno) + ": empty key");
        if (m.kv.count(key))
            fail(origin, "duplicate key '" + key + "'");
        m.kv[key] = value;
    }

    RunConfig c;

    if (!m.has("experiment")) fail(origin, "missing required key 'experiment'");
    {
        std::string e = m.take("experiment");
        if (e == "time_sweep") c.experiment = Experiment::TimeSweep;
        else if (e == "interval_sweep") c.experiment = Experiment::IntervalSweep;
        else if (e == "atom_sweep") c.experiment = Experiment::AtomSweep;
        else if (e == "validate") c.experiment = Experiment::Validate;
        else fail(origin, "key 'experiment': unknown value '" + e + "'");
    }

    if (m.has("atom_count")) c.params.s = parse_int(origin, "atom_count", m.take("atom_count"));
    if (m.has("omega_c_rad_per_time"))
        c.params.omega_c = parse_double(origin, "omega_c_rad_per_time", m.take("omega_c_rad_per_time"));
    if (m.has("omega_a_rad_per_time"))
        c.params.omega_a = parse_double(origin, "omega_a_rad_per_time", m.take("omega_a_rad_per_time"));
    if (m.has("coupling_rad_per_time"))
        c.params.Omega = parse_double(origin, "coupling_rad_per_time", m.take("coupling_rad_per_time"));

    if (m.has("field_kind")) {
        std::string k = m.take("field_kind");
        if (k == "fock") {
            int n = 0;
            if (m.has("photon_number")) n = parse_int(origin, "photon_number", m.take("photon_number"));
            else fail(origin, "field_kind fock requires key 'photon_number'");
            c.params.field_init = FieldInit::fock(n);
        } else if (k == "coherent") {
            double re = 0.0, im = 0.0;
            if (m.has("alpha_re")) re = parse_double(origin, "alpha_re", m.take("alpha_re"));
            else fail(origin, "field_kind coherent requires key 'alpha_re'");
            if (m.has("alpha_im")) im = parse_double(origin, "alpha_im", m.take("alpha_im"));
            c.params.field_init = FieldInit::coherent(cplx(re, im));
        } else {
            fail(origin, "key 'field_kind': unknown value '" + k + "' (fock or coherent)");
        }
    }
    if (m.has("fock_cutoff")) c.params.n_max = parse_int(origin, "fock_cutoff", m.take("fock_cutoff"));

    if (m.has("correction_interval_time"))
        c.intervals.push_back(
            parse_double(origin, "correction_interval_time", m.take("correction_interval_time")));
    if (m.has("correction_intervals_time")) {
        for (const std::string& v : split_commas(m.take("correction_intervals_time")))
            c.intervals.push_back(parse_double(origin, "correction_intervals_time", v));
    }

    if (m.has("times")) {
        for (const std::string& v : split_commas(m.take("times")))
            c.times.push_back(parse_double(origin, "times", v));
    }
    if (m.has("times_linspace")) {
        if (!c.times.empty()) fail(origin, "give either 'times' or 'times_linspace', not both");
        std::vector<std::string> f = split_commas(m.take("times_linspace"));
        if (f.size() != 3) fail(origin, "key 'times_linspace': expected start,stop,count");
        double a = parse_double(origin, "times_linspace", f[0]);
        double b = parse_double(origin, "times_linspace", f[1]);
        int nn = parse_int(origin, "times_linspace", f[2]);
        if (nn < 2 || b <= a) fail(origin, "key 'times_linspace': need stop > start and count >= 2");
        for (int i = 0; i < nn; ++i)
            c.times.push_back(a + (b - a) * static_cast<double>(i) / (nn - 1));
    }

    if (m.has("atoms_list")) {
        for (const std::string& v : split_commas(m.take("atoms_list")))
            c.atoms_list.push_back(parse_int(origin, "atoms_list", v));
    }
    if (m.has("readout_time"))
        c.readout_time = parse_double(origin, "readout_time", m.take("readout_time"));

    if (m.has("pipelines")) {
        for (const std::string& v : split_commas(m.take("pipelines"))) {
            if (v == "exact") c.pipelines.push_back(Pipeline::Exact);
            else if (v == "method1") c.pipelines.push_back(Pipeline::Method1);
            else if (v == "method2") c.pipelines.push_back(Pipeline::Method2);
            else fail(origin, "key 'pipelines': unknown value '" + v + "'");
        }
    }

    if (m.has("output_csv")) c.output_csv = m.take("output_csv");
    if (m.has("fd_step")) c.fd_step = parse_double(origin, "fd_step", m.take("fd_step"));
    if (m.has("cutoff")) c.cutoff = parse_double(origin, "cutoff", m.take("cutoff"));
    if (m.has("threads")) c.threads = parse_int(origin, "threads", m.take("threads"));

    for (const auto& [k, v] : m.kv) {
        if (!m.used.count(k)) fail(origin, "unknown key '" + k + "'");
    }

    c.validate();
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream all;
    all << in.rdbuf();
    return parse_config_text(all.str(), path);
}

void RunConfig::validate() const {
    if (experiment == Experiment::Validate) return; // needs nothing else

    params.resolved(); // throws with a field-specific message on bad physics

    if (pipelines.empty()) throw ValidationError("config: 'pipelines' must list at least one pipeline");
    if (output_csv.empty()) throw ValidationError("config: 'output_csv' is required for sweeps");
    if (!(fd_step >= 0.0) || !std::isfinite(fd_step))
        throw ValidationError("config: 'fd_step' must be >= 0");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff))
        throw ValidationError("config: 'cutoff' must be > 0");
    if (threads < 0) throw ValidationError("config: 'threads' must be >= 0");

    for (double e : intervals) {
        if (!(e > 0.0) || !std::isfinite(e))
            throw ValidationError("config: correction intervals must be positive");
    }
    bool has_m1 = std::count(pipelines.begin(), pipelines.end(), Pipeline::Method1) > 0;
    bool has_m2 = std::count(pipelines.begin(), pipelines.end(), Pipeline::Method2) > 0;
    if (has_m1 && params.field_init.kind != FieldKind::Fock)
        throw ValidationError("config: pipeline method1 requires field_kind fock");

    auto check_times = [&]() {
        if (times.empty()) throw ValidationError("config: 'times' (or 'times_linspace') is required");
        double prev = -1.0;
        for (double t : times) {
            if (!(t >= 0.0) || !std::isfinite(t))
                throw ValidationError("config: times must be finite and >= 0");
            if (t <= prev) throw ValidationError("config: times must be strictly increasing");
            prev = t;
        }
    };

    switch (experiment) {
        case Experiment::TimeSweep:
            check_times();
            if (intervals.size() > 1)
                throw ValidationError("config: time_sweep takes at most one correction interval");
            if (has_m2 && intervals.empty())
                throw ValidationError("config: pipeline method2 needs a correction interval");
            break;
        case Experiment::IntervalSweep:
            check_times();
            if (intervals.empty())
                throw ValidationError("config: interval_sweep needs 'correction_intervals_time'");
            break;
        case Experiment::AtomSweep: {
            if (atoms_list.empty()) throw ValidationError("config: atom_sweep needs 'atoms_list'");
            for (int s : atoms_list) {
                if (s < 1 || s % 2 == 0)
                    throw ValidationError("config: atoms_list entries must be odd and >= 1");
            }
            if (!(readout_time > 0.0) || !std::isfinite(readout_time))
                throw ValidationError("config: atom_sweep needs 'readout_time' > 0");
            if (intervals.size() != 1)
                throw ValidationError("config: atom_sweep needs exactly one correction interval");
            break;
        }
        case Experiment::Validate:
            break;
    }
}

std::string manifest_text(const RunConfig& c) {
    ModelParams rp = (c.experiment == Experiment::Validate) ? c.params : c.params.resolved();
    std::map<std::string, std::string> kv;
    kv["experiment"] = to_string(c.experiment);
    kv["atom_count"] = std::to_string(c.params.s);
    kv["omega_c_rad_per_time"] = fmt(c.params.omega_c);
    kv["omega_a_rad_per_time"] = fmt(c.params.omega_a);
    kv["coupling_rad_per_time"] = fmt(c.params.Omega);
    if (c.params.field_init.kind == FieldKind::Fock) {
        kv["field_kind"] = "fock";
        kv["photon_number"] = std::to_string(c.params.field_init.photon_number);
    } else {
        kv["field_kind"] = "coherent";
        kv["alpha_re"] = fmt(c.params.field_init.alpha.real());
        kv["alpha_im"] = fmt(c.params.field_init.alpha.imag());
    }
    kv["fock_cutoff"] = std::to_string(rp.n_max);

    auto join = [](const auto& xs, auto f) {
        std::string out;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) out += ",";
            out += f(xs[i]);
        }
        return out;
    };
    if (!c.intervals.empty())
        kv["correction_intervals_time"] = join(c.intervals, [](double x) { return fmt(x); });
    if (!c.times.empty()) kv["times"] = join(c.times, [](double x) { return fmt(x); });
    if (!c.atoms_list.empty())
        kv["atoms_list"] = join(c.atoms_list, [](int x) { return std::to_string(x); });
    if (c.experiment == Experiment::AtomSweep) kv["readout_time"] = fmt(c.readout_time);
    if (!c.pipelines.empty())
        kv["pipelines"] = join(c.pipelines, [](Pipeline p) { return to_string(p); });
    if (!c.output_csv.empty()) kv["output_csv"] = c.output_csv;
    kv["fd_step"] = fmt(c.fd_step);
    kv["cutoff"] = fmt(c.cutoff);
    // worker-pool size is a performance knob, not a result-determining
    // parameter: identical configs must produce identical bytes at any
    // thread count, so it stays out of the manifest

    std::string out;
    for (const auto& [k, v] : kv) { // std::map iterates in sorted key order
        out += k;
        out += "=";
        out += v;
        out += "\n";
    }
    return out;
}

} // namespace tcqfi
