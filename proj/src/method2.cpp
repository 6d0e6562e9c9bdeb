#include "tcqfi/method2.hpp"

#include <cmath>
#include <limits>

#include "tcqfi/constants.hpp"
#include "tcqfi/operators.hpp"
#include "tcqfi/qfi.hpp"

namespace tcqfi::method2 {

namespace {

void check_odd_s(int s, const char* where) {
    if (s < 1 || s % 2 == 0)
        throw ValidationError(std::string(where) + " requires an odd atom count >= 1");
}

Eigen::Matrix4d matrix_power(Eigen::Matrix4d base, long e) {
    Eigen::Matrix4d acc = Eigen::Matrix4d::Identity();
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

} // namespace

DressedBasis dressed_basis_amp(const ModelParams& p, cplx amp) {
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
        throw ValidationError("field amplitude must be finite");
    if (!std::isfinite(p.omega_a) || !std::isfinite(p.omega_c) || !std::isfinite(p.Omega))
        throw ValidationError("model frequencies must be finite");

    const double n_eff = std::norm(amp);
    const double g2 = n_eff * p.Omega * p.Omega; // squared coupling amplitude
    DressedBasis db;
    db.Delta2 = std::sqrt(g2 + p.omega_a * p.omega_a);
    db.E_plus = n_eff * p.omega_c + 0.5 * db.Delta2;
    db.E_minus = n_eff * p.omega_c - 0.5 * db.Delta2;

    if (g2 == 0.0) {
        // No coupling: the bare basis already diagonalizes the Hamiltonian.
        // The upper level is |e> for positive detuning-free splitting and
        // |g> otherwise (at omega_a == 0 the levels are degenerate and the
        // ground-state convention is kept).
        if (p.omega_a > 0.0) {
            db.c0 = cplx(0.0, 0.0);
            db.c1 = cplx(1.0, 0.0);
            db.b = cplx(0.0, 0.0);
        } else {
            db.c0 = cplx(1.0, 0.0);
            db.c1 = cplx(0.0, 0.0);
            db.b = cplx(std::numeric_limits<double>::infinity(), 0.0);
        }
        return db;
    }

    // b = (Delta2 - omega_a) / (Omega * amp); for omega_a >= 0 the
    // algebraically equal form Omega * conj(amp) / (Delta2 + omega_a) avoids
    // the cancellation between Delta2 and omega_a at weak coupling.
    if (p.omega_a >= 0.0)
        db.b = p.Omega * std::conj(amp) / (db.Delta2 + p.omega_a);
    else
        db.b = (db.Delta2 - p.omega_a) / (p.Omega * amp);

    const double m = std::abs(db.b);
    if (m <= 1.0) {
        const double inv = 1.0 / std::sqrt(1.0 + m * m);
        db.c0 = db.b * inv;
        db.c1 = cplx(inv, 0.0);
    } else {
        const double inv = 1.0 / std::sqrt(1.0 + 1.0 / (m * m));
        db.c0 = (db.b / m) * inv;
        db.c1 = cplx(inv / m, 0.0);
    }
    return db;
}

DressedBasis dressed_basis(const ModelParams& p, double n_eff) {
    if (!(n_eff >= 0.0) || !std::isfinite(n_eff))
        throw ValidationError("n_eff must be finite and nonnegative");
    return dressed_basis_amp(p, cplx(std::sqrt(n_eff), 0.0));
}

XCoefficients x_coefficients(double eps, const DressedBasis& db) {
    if (!std::isfinite(eps)) throw ValidationError("interval must be finite");
    const cplx ep = std::exp(cplx(0.0, -db.E_plus * eps));
    const cplx em = std::exp(cplx(0.0, -db.E_minus * eps));
    const double w0 = std::norm(db.c0);
    const double w1 = std::norm(db.c1);
    XCoefficients xc;
    xc.x1 = w0 * ep + w1 * em;
    xc.x2 = std::conj(db.c0) * db.c1 * (ep - em);
    xc.x3 = db.c0 * std::conj(db.c1) * (ep - em);
    xc.x4 = w1 * ep + w0 * em;
    return xc;
}

TransferMatrix transfer_matrix(int k, double eps, int s, const XCoefficients& xc) {
    (void)eps;
    check_odd_s(s, "transfer_matrix");
    if (k < (s + 1) / 2 || k > s)
        throw ValidationError("syndrome index k must lie in [(s+1)/2, s]");

    const cplx z0k = cpow_int(xc.x1, k) * cpow_int(xc.x2, s - k);
    const cplx z1k = cpow_int(xc.x3, k) * cpow_int(xc.x4, s - k);
    const cplx z0m = cpow_int(xc.x1, s - k) * cpow_int(xc.x2, k);
    const cplx z1m = cpow_int(xc.x3, s - k) * cpow_int(xc.x4, k);
    Eigen::Matrix2cd A;
    A << z0k, z1k, z0m, z1m;

    Eigen::Matrix2cd sigma[4];
    sigma[0] << 1, 0, 0, 1;
    sigma[1] << 0, 1, 1, 0;
    sigma[2] << 0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0;
    sigma[3] << 1, 0, 0, -1;

    const double w = 0.5 * binomial(s, k);
    TransferMatrix tm;
    for (int a = 0; a < 4; ++a) {
        const Eigen::Matrix2cd m = A * sigma[a] * A.adjoint(); // Hermitian
        tm.matrix(0, a) = w * (m(0, 0) + m(1, 1)).real();
        tm.matrix(1, a) = w * (m(0, 1) + m(1, 0)).real();
        tm.matrix(2, a) = w * (cplx(0.0, 1.0) * (m(0, 1) - m(1, 0))).real();
        tm.matrix(3, a) = w * (m(0, 0) - m(1, 1)).real();
    }
    return tm;
}

TransferMatrix total_transfer(double eps, int s, const DressedBasis& db) {
    check_odd_s(s, "total_transfer");
    const XCoefficients xc = x_coefficients(eps, db);
    TransferMatrix sum;
    sum.matrix.setZero();
    for (int k = (s + 1) / 2; k <= s; ++k)
        sum.matrix += transfer_matrix(k, eps, s, xc).matrix;
    return sum;
}

TransferMatrix total_transfer(double eps, int s, const ModelParams& p) {
    return total_transfer(eps, s, dressed_basis(p, p.n_eff()));
}

CorrectedState corrected_state(long eta, double eps, int s, const DressedBasis& db) {
    check_odd_s(s, "corrected_state");
    if (eta < 0) throw ValidationError("correction count must be nonnegative");

    const Eigen::Matrix4d power =
        matrix_power(total_transfer(eps, s, db).matrix, eta);
    Eigen::Vector4d r = power * Eigen::Vector4d(1.0, 1.0, 0.0, 0.0);

    CorrectedState cs;
    cs.pre_renormalization_trace = r(0);
    if (!(std::abs(r(0)) > tol::qfi_cutoff))
        throw NumericError("corrected state lost its trace weight");
    r /= r(0);

    const double len = r.tail<3>().norm();
    if (len > 1.0 + tol::bloch_excess)
        throw NumericError("corrected Bloch vector left the unit ball: length " +
                           std::to_string(len));
    if (len > 1.0) r.tail<3>() /= len;
    cs.bloch = r;

    cs.rho = DensityMatrix(2, 2);
    cs.rho(0, 0) = cplx(0.5 * (1.0 + r(3)), 0.0);
    cs.rho(0, 1) = cplx(0.5 * r(1), -0.5 * r(2));
    cs.rho(1, 0) = cplx(0.5 * r(1), 0.5 * r(2));
    cs.rho(1, 1) = cplx(0.5 * (1.0 - r(3)), 0.0);
    return cs;
}

CorrectedState corrected_state(long eta, double eps, int s, const ModelParams& p) {
    return corrected_state(eta, eps, s, dressed_basis(p, p.n_eff()));
}

DensityMatrix corrected_bloch(long eta, double eps, int s, const ModelParams& p) {
    return corrected_state(eta, eps, s, p).rho;
}

std::vector<std::pair<int, double>> qfi_vs_atoms(const std::vector<int>& s_list,
                                                 double eps, double t,
                                                 const ModelParams& p) {
    if (!(eps > 0.0)) throw ValidationError("correction interval must be positive");
    if (!(t >= 0.0)) throw ValidationError("time must be nonnegative");
    const double ratio = t / eps;
    const long eta = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(eta)) > 1e-9 * std::max(1.0, ratio))
        throw ValidationError("time must be an integer multiple of the interval");

    std::vector<std::pair<int, double>> out;
    out.reserve(s_list.size());
    for (int s : s_list) {
        check_odd_s(s, "qfi_vs_atoms");
        ModelParams q = p;
        q.s = s;
        const DensityFamily family = [q, eta, eps, s](double delta) {
            ModelParams r = q;
            r.omega_a = r.omega_c + delta;
            return corrected_bloch(eta, eps, s, r);
        };
        out.emplace_back(s, qfi_spectral(family, p.delta()).value);
    }
    return out;
}

} // namespace tcqfi::method2
