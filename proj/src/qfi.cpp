#include "tcqfi/qfi.hpp"

#include <cmath>
#include <vector>

#include "tcqfi/operators.hpp"

namespace tcqfi {

double default_fd_step(double tau0) { return tol::fd_scale * std::max(1.0, std::abs(tau0)); }

namespace {

struct MatchedStencil {
    RVec lam;  // eigenvalue of the branch matched to each kept center index
    CMat vec;  // phase-aligned eigenvector, one column per kept index
};

// Follow each retained eigenbranch from the center to one stencil point.
MatchedStencil match_branches(const EigenDecomposition& center,
                              const EigenDecomposition& side,
                              const std::vector<Index>& keep) {
    Index n = center.eigenvalues.size();
    CMat overlaps = center.eigenvectors.adjoint() * side.eigenvectors;
    MatchedStencil out;
    out.lam = RVec::Zero(static_cast<Index>(keep.size()));
    out.vec = CMat::Zero(n, static_cast<Index>(keep.size()));
    std::vector<char> used(n, 0);
    for (std::size_t p = 0; p < keep.size(); ++p) {
        Index i = keep[p];
        Index best = -1;
        double best2 = -1.0;
        for (Index j = 0; j < n; ++j) {
            if (used[j]) continue;
            double o2 = std::norm(overlaps(i, j));
            if (o2 > best2) {
                best2 = o2;
                best = j;
            }
        }
        if (best < 0 || best2 < tol::crossing_overlap2)
            throw NumericError(
                "eigenvalue crossing inside the finite-difference stencil; shrink the step");
        used[best] = 1;
        cplx phase = overlaps(i, best) / std::abs(overlaps(i, best));
        out.lam(static_cast<Index>(p)) = side.eigenvalues(best);
        out.vec.col(static_cast<Index>(p)) = side.eigenvectors.col(best) * std::conj(phase);
    }
    return out;
}

} // namespace

QfiResult qfi_spectral(const DensityFamily& rho_at, double tau0, double h, double cutoff) {
    if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
    if (cutoff < 0.0) throw ValidationError("support cutoff must be non-negative");

    DensityMatrix r0 = rho_at(tau0);
    EigenDecomposition e0 = hermitian_eig(r0);
    EigenDecomposition ep = hermitian_eig(rho_at(tau0 + h));
    EigenDecomposition em = hermitian_eig(rho_at(tau0 - h));
    Index n = e0.eigenvalues.size();

    // retained support, largest eigenvalue first so branch matching claims the
    // dominant directions before the marginal ones
    std::vector<Index> keep;
    for (Index i = n - 1; i >= 0; --i)
        if (e0.eigenvalues(i) > cutoff) keep.push_back(i);

    MatchedStencil plus = match_branches(e0, ep, keep);
    MatchedStencil minus = match_branches(e0, em, keep);

    double inv2h = 1.0 / (2.0 * h);
    // derivative data per kept index; kept_pos[i] locates a center index in keep
    std::vector<Index> kept_pos(n, -1);
    for (std::size_t p = 0; p < keep.size(); ++p) kept_pos[keep[p]] = static_cast<Index>(p);

    CMat dvec(n, static_cast<Index>(keep.size()));
    RVec dlam(static_cast<Index>(keep.size()));
    for (std::size_t p = 0; p < keep.size(); ++p) {
        Index pp = static_cast<Index>(p);
        dlam(pp) = (plus.lam(pp) - minus.lam(pp)) * inv2h;
        dvec.col(pp) = (plus.vec.col(pp) - minus.vec.col(pp)) * inv2h;
    }

    double sum_classical = 0.0;
    for (std::size_t p = 0; p < keep.size(); ++p) {
        Index pp = static_cast<Index>(p);
        sum_classical += dlam(pp) * dlam(pp) / e0.eigenvalues(keep[p]);
    }

    // Eigenvector terms, grouped per unordered pair (i, j): the two population
    // contributions 4*l_i |<v_j|dv_i>|^2 + 4*l_j |<v_i|dv_j>|^2 and the
    // coherence contribution -16 (l_i l_j / (l_i + l_j)) |<v_i|dv_j>|^2 combine
    // (using |<v_i|dv_j>| = |<v_j|dv_i>|) into a single non-negative weight
    //     4 (l_i - l_j)^2 / (l_i + l_j).
    // Grouping first keeps a near-degenerate pair finite by construction: its
    // weight vanishes quadratically in the gap, instead of two large terms
    // cancelling in floating point. When only one branch carries a tracked
    // derivative (the partner sits below the support cutoff) the single
    // available amplitude is used; the clamped weight then reduces to 4*l_i.
    double sum_pairs = 0.0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (kept_pos[i] < 0 && kept_pos[j] < 0) continue;
            double li = std::max(e0.eigenvalues(i), 0.0);
            double lj = std::max(e0.eigenvalues(j), 0.0);
            if (li + lj <= cutoff) continue;
            double weight = 4.0 * (li - lj) * (li - lj) / (li + lj);
            if (weight == 0.0) continue;
            double amp2;
            if (kept_pos[i] >= 0 && kept_pos[j] >= 0)
                amp2 = 0.5 * (std::norm(e0.eigenvectors.col(i).dot(dvec.col(kept_pos[j]))) +
                              std::norm(e0.eigenvectors.col(j).dot(dvec.col(kept_pos[i]))));
            else if (kept_pos[j] >= 0)
                amp2 = std::norm(e0.eigenvectors.col(i).dot(dvec.col(kept_pos[j])));
            else
                amp2 = std::norm(e0.eigenvectors.col(j).dot(dvec.col(kept_pos[i])));
            sum_pairs += weight * amp2;
        }
    }

    double value = sum_classical + sum_pairs;
    if (value < 0.0) {
        if (value < -tol::qfi_clip)
            throw NumericError("quantum Fisher information evaluated significantly negative");
        value = 0.0;
    }

    QfiResult res;
    res.parameter_value = tau0;
    res.value = value;
    res.fd_step = h;
    res.support_cutoff = cutoff;
    return res;
}

QfiResult qfi_spectral(const DensityFamily& rho_at, double tau0) {
    return qfi_spectral(rho_at, tau0, default_fd_step(tau0), tol::qfi_cutoff);
}

double sld_oracle(const DensityMatrix& rho, const CMat& drho, double cutoff) {
    if ((drho - drho.adjoint()).cwiseAbs().maxCoeff() > tol::hermitian_input)
        throw ValidationError("density-matrix derivative must be Hermitian");
    EigenDecomposition ed = hermitian_eig(rho);
    CMat d = ed.eigenvectors.adjoint() * drho * ed.eigenvectors;
    Index n = ed.eigenvalues.size();
    double f = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            double denom = ed.eigenvalues(i) + ed.eigenvalues(j);
            if (denom <= cutoff) continue;
            f += 2.0 * std::norm(d(i, j)) / denom;
        }
    return f;
}

double pure_state_qfi(const StateVector& psi, const StateVector& dpsi) {
    double nrm = psi.norm();
    if (std::abs(nrm - 1.0) > tol::state_norm * 10)
        throw ValidationError("pure-state Fisher information needs a normalized state");
    cplx overlap = psi.dot(dpsi);
    return 4.0 * (dpsi.squaredNorm() - std::norm(overlap));
}

CMat central_difference(const DensityFamily& rho_at, double tau0, double h) {
    if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
    return (rho_at(tau0 + h) - rho_at(tau0 - h)) / (2.0 * h);
}

} // namespace tcqfi
