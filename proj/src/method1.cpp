#include "tcqfi/method1.hpp"

#include <cmath>

#include "tcqfi/constants.hpp"
#include "tcqfi/operators.hpp"

namespace tcqfi::method1 {

namespace {

ModelParams checked_fock(const ModelParams& p) {
    ModelParams q = p.resolved();
    if (q.field_init.kind != FieldKind::Fock)
        throw ValidationError("the pinned-cavity pipeline needs a Fock field");
    return q;
}

} // namespace

double RabiParams::chi(double t) const {
    if (amp2 == 0.0) return 0.0;
    double s = std::sin(0.5 * Delta * t);
    return (amp2 / (Delta * Delta)) * s * s;
}

RabiParams rabi_params(const ModelParams& p) {
    ModelParams q = checked_fock(p);
    RabiParams r;
    r.amp2 = (q.n_eff() + 1.0) * q.Omega * q.Omega;
    r.Delta = std::sqrt(q.delta() * q.delta() + r.amp2);
    return r;
}

double chi(double t, const ModelParams& p) { return rabi_params(p).chi(t); }

double chi_printed(double t, const ModelParams& p) {
    RabiParams r = rabi_params(p);
    if (r.amp2 == 0.0) return 0.0;
    return (r.amp2 / (r.Delta * r.Delta)) * std::sin(0.5 * r.Delta * t);
}

CollectivePropagator collective_propagator(double t, const ModelParams& p) {
    ModelParams q = checked_fock(p);
    CollectiveOperators ops = collective_operators(q.s);
    double amp = 0.5 * q.Omega * std::sqrt(q.n_eff() + 1.0);
    CMat h = 0.5 * q.delta() * ops.S_z + amp * (ops.S_plus + ops.S_minus);
    CollectivePropagator u;
    u.matrix = unitary_from_eig(hermitian_eig(h), t);
    u.photon_number = q.field_init.photon_number;
    return u;
}

std::vector<double> s_atom_diagonal(int s, double tau, const ModelParams& p) {
    if (s < 2) throw ValidationError("binomial diagonal needs at least 2 atoms");
    double x = chi(tau, p);
    std::vector<double> diag(static_cast<std::size_t>(s) + 1);
    for (int k = 0; k <= s; ++k) {
        double direct = std::pow(x, k) * std::pow(1.0 - x, s - k);
        double mirrored = std::pow(x, s - k) * std::pow(1.0 - x, k);
        diag[static_cast<std::size_t>(k)] = 0.5 * binomial(s, k) * (direct + mirrored);
    }
    return diag;
}

cplx corrected_corner(long eta, double eps, double tau, const ModelParams& p) {
    ModelParams q = checked_fock(p);
    if (q.s % 2 == 0) throw ValidationError("corner recursion needs odd s");
    if (eta < 0) throw ValidationError("correction count must be non-negative");
    int s = q.s;
    CMat u_tau = collective_propagator(tau, q).matrix;
    cplx prod = u_tau(0, 0) * std::conj(u_tau(s, s));
    if (eta > 0) {
        CMat u_eps = collective_propagator(eps, q).matrix;
        prod *= cpow_int(u_eps(0, 0) * std::conj(u_eps(s, s)), eta);
    }
    double t = static_cast<double>(eta) * eps + tau;
    cplx phase = std::exp(cplx(0.0, s * q.omega_c * t));
    return 0.5 * phase * prod;
}

DensityMatrix corrected_density(long eta, double eps, double tau, const ModelParams& p) {
    ModelParams q = checked_fock(p);
    if (q.s % 2 == 0) throw ValidationError("corner recursion needs odd s");
    int s = q.s;
    std::vector<double> diag = s_atom_diagonal(s, tau, q);
    cplx corner = corrected_corner(eta, eps, tau, q);

    // the corner magnitude may not exceed the codeword population
    double bound = diag[0];
    double mag = std::abs(corner);
    if (mag > bound) {
        if (mag > bound + tol::corner_band)
            throw NumericError("corner coherence exceeds its positivity bound; "
                               "the pinned-cavity approximation broke down");
        corner *= bound / mag;
    }

    DensityMatrix rho = DensityMatrix::Zero(s + 1, s + 1);
    for (int k = 0; k <= s; ++k) rho(k, k) = diag[static_cast<std::size_t>(k)];
    rho(0, s) = corner;
    rho(s, 0) = std::conj(corner);
    return rho;
}

DensityMatrix uncorrected_entries(double eps, const ModelParams& p) {
    ModelParams q = checked_fock(p);
    if (q.s != 3) throw ValidationError("the explicit uncorrected entries are the 3-atom case");
    return corrected_density(0, eps, eps, q);
}

double error_rate_law(double eps, const ModelParams& p) {
    if (eps < 0.0) throw ValidationError("interval must be non-negative");
    ModelParams q = p.resolved();
    return 0.25 * q.s * (q.n_eff() + 1.0) * q.Omega * q.Omega * eps;
}

cplx p14_printed(double eps, const ModelParams& p) {
    if (!(eps > 0.0)) throw ValidationError("the printed corner form is singular at eps = 0");
    ModelParams q = checked_fock(p);
    RabiParams r = rabi_params(q);
    double d = q.delta();
    double D = r.Delta;
    double x1 = r.chi(eps);
    double x3 = r.chi(3.0 * eps);
    double cot = std::cos(0.5 * D * eps) / std::sin(0.5 * D * eps);
    cplx bracket = cplx(0.0, d) * (3.0 * x1 + (4.0 * d * d / r.amp2 + 3.0) * x3);
    bracket += 3.0 * x1 * D * cot;
    bracket += ((D * D + 3.0 * d * d) / D) * std::cos(1.5 * D * eps);
    return bracket * bracket / (16.0 * D * D * D * D);
}

} // namespace tcqfi::method1
