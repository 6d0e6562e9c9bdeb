#include "tcqfi/exact_sim.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "tcqfi/constants.hpp"
#include "tcqfi/operators.hpp"
#include "tcqfi/qec.hpp"
#include "tcqfi/qfi.hpp"

namespace tcqfi::exact_sim {

namespace {

// The Hamiltonian conserves the total excitation number (photons plus excited
// atoms), so the joint space splits into small invariant shells.  Each shell
// is eigendecomposed once; propagators for any step length then come cheap.
struct ShellBlocks {
    Index atom_dim = 0;
    Index field_dim = 0;
    std::vector<std::vector<Index>> indices; // joint indices per shell
    std::vector<EigenDecomposition> eig;     // restricted Hamiltonian per shell

    Index total() const { return atom_dim * field_dim; }
};

int atom_weight(Index a, Basis basis) {
    if (basis == Basis::Collective) return static_cast<int>(a);
    return std::popcount(static_cast<unsigned>(a));
}

ShellBlocks build_blocks(const ModelParams& p, Basis basis) {
    ShellBlocks b;
    b.atom_dim = p.atom_dim(basis);
    b.field_dim = p.field_dim();

    const CMat h = basis == Basis::Collective ? build_collective_hamiltonian(p)
                                              : build_full_hamiltonian(p);

    const int max_shell = p.s + (p.n_max);
    b.indices.assign(static_cast<std::size_t>(max_shell) + 1, {});
    for (Index a = 0; a < b.atom_dim; ++a) {
        const int w = atom_weight(a, basis);
        for (Index m = 0; m < b.field_dim; ++m)
            b.indices[static_cast<std::size_t>(w + m)].push_back(a * b.field_dim + m);
    }

    b.eig.reserve(b.indices.size());
    for (const auto& idx : b.indices) {
        const Index d = static_cast<Index>(idx.size());
        CMat sub(d, d);
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j) sub(i, j) = h(idx[i], idx[j]);
        b.eig.push_back(hermitian_eig(sub));
    }
    return b;
}

// shell propagators for one step length
std::vector<CMat> make_propagator(const ShellBlocks& b, double dt) {
    std::vector<CMat> u;
    u.reserve(b.eig.size());
    for (const auto& ed : b.eig) u.push_back(unitary_from_eig(ed, dt));
    return u;
}

// rho <- U rho U^dag, shell by shell; tmp is caller-provided scratch
void apply_propagator(CMat& rho, const ShellBlocks& b, const std::vector<CMat>& u,
                      CMat& tmp) {
    tmp.setZero();
    for (std::size_t n = 0; n < b.indices.size(); ++n) {
        const auto& idx = b.indices[n];
        const Index d = static_cast<Index>(idx.size());
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j) tmp.row(idx[i]) += u[n](i, j) * rho.row(idx[j]);
    }
    rho.setZero();
    for (std::size_t n = 0; n < b.indices.size(); ++n) {
        const auto& idx = b.indices[n];
        const Index d = static_cast<Index>(idx.size());
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j)
                rho.col(idx[i]) += std::conj(u[n](i, j)) * tmp.col(idx[j]);
    }
}

void apply_propagator_state(StateVector& psi, const ShellBlocks& b,
                            const std::vector<CMat>& u) {
    StateVector tmp = StateVector::Zero(psi.size());
    for (std::size_t n = 0; n < b.indices.size(); ++n) {
        const auto& idx = b.indices[n];
        const Index d = static_cast<Index>(idx.size());
        for (Index i = 0; i < d; ++i) {
            cplx acc(0.0, 0.0);
            for (Index j = 0; j < d; ++j) acc += u[n](i, j) * psi(idx[j]);
            tmp(idx[i]) = acc;
        }
    }
    psi.swap(tmp);
}

double top_level_population(const CMat& rho, const ShellBlocks& b) {
    double pop = 0.0;
    for (Index a = 0; a < b.atom_dim; ++a)
        pop += rho(a * b.field_dim + b.field_dim - 1, a * b.field_dim + b.field_dim - 1)
                   .real();
    return pop;
}

double top_level_population(const StateVector& psi, const ShellBlocks& b) {
    double pop = 0.0;
    for (Index a = 0; a < b.atom_dim; ++a)
        pop += std::norm(psi(a * b.field_dim + b.field_dim - 1));
    return pop;
}

void check_leakage(double pop, double t) {
    if (pop > tol::leakage)
        throw NumericError("population " + std::to_string(pop) +
                           " leaked into the top field level at time " +
                           std::to_string(t) + "; raise n_max");
}

DensityMatrix reduce_state(const StateVector& psi, const ShellBlocks& b) {
    DensityMatrix r = DensityMatrix::Zero(b.atom_dim, b.atom_dim);
    for (Index a = 0; a < b.atom_dim; ++a)
        for (Index c = 0; c < b.atom_dim; ++c) {
            cplx acc(0.0, 0.0);
            for (Index m = 0; m < b.field_dim; ++m)
                acc += psi(a * b.field_dim + m) * std::conj(psi(c * b.field_dim + m));
            r(a, c) = acc;
        }
    return r;
}

void check_grid(const std::vector<double>& grid) {
    double prev = 0.0;
    for (double t : grid) {
        if (!std::isfinite(t) || t < 0.0)
            throw ValidationError("grid times must be finite and nonnegative");
        if (t < prev) throw ValidationError("grid times must be ascending");
        prev = t;
    }
}

// Reduced atomic states along the grid for one parameter point.
std::vector<DensityMatrix> run_reduced(const ModelParams& p,
                                       const std::optional<double>& interval,
                                       const std::vector<double>& grid,
                                       Basis basis) {
    const ShellBlocks blocks = build_blocks(p, basis);
    std::vector<DensityMatrix> reduced;
    reduced.reserve(grid.size());

    if (!interval) {
        // no corrections: the joint state stays pure, walk the grid forward
        StateVector psi = initial_state(p, basis);
        double t_prev = 0.0;
        for (double t : grid) {
            if (t > t_prev)
                apply_propagator_state(psi, blocks, make_propagator(blocks, t - t_prev));
            t_prev = t;
            check_leakage(top_level_population(psi, blocks), t);
            reduced.push_back(reduce_state(psi, blocks));
        }
        return reduced;
    }

    const double eps = *interval;
    const KrausSet channel = basis == Basis::Collective ? collective_correction(p.s)
                                                        : majority_correction(p.s);
    const std::vector<CMat> u_eps = make_propagator(blocks, eps);

    CMat rho = initial_density(p, basis);
    CMat scratch(blocks.total(), blocks.total());
    long done = 0;
    for (double t : grid) {
        const QecSchedule sched = QecSchedule::factor(eps, t);
        while (done < sched.corrections) {
            apply_propagator(rho, blocks, u_eps, scratch);
            ++done;
            check_leakage(top_level_population(rho, blocks), done * eps);
            rho = apply_channel(rho, channel);
        }
        CMat snapshot = rho;
        if (sched.residual > 0.0)
            apply_propagator(snapshot, blocks, make_propagator(blocks, sched.residual),
                             scratch);
        check_leakage(top_level_population(snapshot, blocks), t);
        reduced.push_back(partial_trace_field(snapshot, {blocks.atom_dim, blocks.field_dim}));
    }
    return reduced;
}

} // namespace

QecSchedule QecSchedule::factor(double eps, double t) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw ValidationError("correction interval must be positive");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw ValidationError("time must be nonnegative");
    QecSchedule q;
    q.interval = eps;
    q.corrections = static_cast<long>(std::floor(t / eps + 1e-9));
    if (q.corrections < 0) q.corrections = 0;
    q.residual = t - static_cast<double>(q.corrections) * eps;
    if (q.residual < 0.0) q.residual = 0.0;
    if (q.residual >= eps) { // floating-point backstop
        ++q.corrections;
        q.residual = 0.0;
    }
    return q;
}

Trajectory simulate(const ModelParams& p, const std::optional<QecSchedule>& sched,
                    const std::vector<double>& t_grid, Basis basis) {
    ModelParams q = p.resolved();
    q.validate();
    check_grid(t_grid);
    std::optional<double> interval;
    if (sched) {
        if (!(sched->interval > 0.0) || !std::isfinite(sched->interval))
            throw ValidationError("correction interval must be positive");
        interval = sched->interval;
    }

    const double delta0 = q.delta();
    const double h = default_fd_step(delta0);
    const auto at_delta = [&q](double d) {
        ModelParams r = q;
        r.omega_a = r.omega_c + d;
        return r;
    };

    const std::vector<DensityMatrix> center = run_reduced(q, interval, t_grid, basis);
    const std::vector<DensityMatrix> lower =
        run_reduced(at_delta(delta0 - h), interval, t_grid, basis);
    const std::vector<DensityMatrix> upper =
        run_reduced(at_delta(delta0 + h), interval, t_grid, basis);

    const Index top = q.atom_dim(basis) - 1;
    Trajectory out;
    out.times = t_grid;
    out.qfi.reserve(t_grid.size());
    out.code_population.reserve(t_grid.size());
    out.corner_coherence.reserve(t_grid.size());

    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const DensityFamily family = [&, i](double d) -> DensityMatrix {
            if (d < delta0 - 0.5 * h) return lower[i];
            if (d > delta0 + 0.5 * h) return upper[i];
            return center[i];
        };
        out.qfi.push_back(qfi_spectral(family, delta0, h, tol::qfi_cutoff).value);

        const double pop = center[i](0, 0).real() + center[i](top, top).real();
        if (pop < -1e-9 || pop > 1.0 + 1e-9)
            throw NumericError("codeword population " + std::to_string(pop) +
                               " outside [0, 1] at time " + std::to_string(t_grid[i]));
        out.code_population.push_back(pop);
        out.corner_coherence.push_back(center[i](0, top));
    }
    return out;
}

double error_rate_empirical(const ModelParams& p, double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw ValidationError("interval must be positive");
    ModelParams q = p.resolved();
    q.validate();

    const ShellBlocks blocks = build_blocks(q, Basis::Collective);
    StateVector psi = initial_state(q, Basis::Collective);
    apply_propagator_state(psi, blocks, make_propagator(blocks, eps));
    check_leakage(top_level_population(psi, blocks), eps);

    const DensityMatrix r = reduce_state(psi, blocks);
    const double pop = r(0, 0).real() + r(q.s, q.s).real();
    return (1.0 - pop) / eps;
}

namespace {

std::vector<double> linspace(double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = hi * static_cast<double>(i) / (n - 1);
    return g;
}

} // namespace

std::vector<double> default_grid_long() { return linspace(20.0, 200); }
std::vector<double> default_grid_short() { return linspace(10.0, 200); }

} // namespace tcqfi::exact_sim
