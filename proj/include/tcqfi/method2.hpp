#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tcqfi/model.hpp"
#include "tcqfi/types.hpp"

// Pinned-amplitude pipeline: the cavity operators are frozen to the c-number
// amplitude sqrt(n_eff), each atom evolves in the resulting dressed two-level
// basis, and a correction interval compiles to a real 4x4 transfer matrix
// acting on the (I, x, y, z) Bloch components of the two-codeword subspace.
// Long evolutions are then matrix powers instead of repeated simulation.
namespace tcqfi::method2 {

// Dressed eigenbasis of the single-atom pinned-amplitude Hamiltonian
//   H = n_eff w_c + (w_a/2) sigma_z + (Omega/2)(a sigma_+ + a* sigma_-),
// n_eff = |a|^2.  Eigenvalues E_pm = n_eff w_c +- Delta2/2 with splitting
// Delta2 = sqrt(n_eff Omega^2 + w_a^2); the upper eigenstate is
// |+> = c0|g> + c1|e> and its orthogonal partner -conj(c1)|g> + conj(c0)|e>.
struct DressedBasis {
    double E_plus = 0.0;
    double E_minus = 0.0;
    cplx c0{0.0, 0.0};
    cplx c1{0.0, 0.0};
    cplx b{0.0, 0.0};     // dressing ratio c0/c1 = (Delta2 - w_a)/(Omega a);
                          // infinite when c1 == 0
    double Delta2 = 0.0;  // dressed level splitting, E_plus - E_minus
};

// Dressed basis for a real positive amplitude a = sqrt(n_eff).
DressedBasis dressed_basis(const ModelParams& p, double n_eff);

// Dressed basis for an explicit complex amplitude (n_eff = |amp|^2).  The
// amplitude phase conjugates the one-interval map by diag(1, e^{i arg amp})
// per atom.  Corrections act in the fixed bare basis and are not covariant
// under that rotation, so compiled multi-interval predictions genuinely
// depend on the phase; the standard working point is the real positive
// amplitude sqrt(n_eff).
DressedBasis dressed_basis_amp(const ModelParams& p, cplx amp);

// Single-atom transition amplitudes across one interval, in the bare basis:
//   U(eps)|g> = x1|g> + x2|e>,   U(eps)|e> = x3|g> + x4|e>.
struct XCoefficients {
    cplx x1{1.0, 0.0};
    cplx x2{0.0, 0.0};
    cplx x3{0.0, 0.0};
    cplx x4{1.0, 0.0};
};

XCoefficients x_coefficients(double eps, const DressedBasis& db);

// Real 4x4 map on Bloch 4-vectors (I, x, y, z) of the codeword subspace.
struct TransferMatrix {
    Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();
};

// One majority syndrome branch: rho -> C(s,k) A(k) rho A(k)^dag, where k is
// the number of unflipped atoms, (s+1)/2 <= k <= s, and
//   A(k) = [[z0(k), z1(k)], [z0(s-k), z1(s-k)]],
//   z0(k) = x1^k x2^(s-k),  z1(k) = x3^k x4^(s-k).
// eps is carried for interface symmetry; xc must be built at the same eps.
TransferMatrix transfer_matrix(int k, double eps, int s, const XCoefficients& xc);

// Full correction interval: evolve for eps, then majority-vote correct.
// Sums transfer_matrix over all correctable syndromes.  Trace preservation
// makes row 0 equal (1,0,0,0) and unitality zeroes column 0 below the corner.
TransferMatrix total_transfer(double eps, int s, const ModelParams& p);
TransferMatrix total_transfer(double eps, int s, const DressedBasis& db);

// Code-space state after eta correction intervals, starting from the
// logical plus state (Bloch vector (1, 1, 0, 0)).
struct CorrectedState {
    DensityMatrix rho;                       // 2x2 in the (all-g, all-e) basis
    Eigen::Vector4d bloch;                   // renormalized Bloch 4-vector
    double pre_renormalization_trace = 1.0;  // weight component before renorm
};

CorrectedState corrected_state(long eta, double eps, int s, const ModelParams& p);
CorrectedState corrected_state(long eta, double eps, int s, const DressedBasis& db);
DensityMatrix corrected_bloch(long eta, double eps, int s, const ModelParams& p);

// Fisher information of the corrected code-space state with respect to the
// detuning at time t = eta * eps, for each atom count in s_list.  t must be
// an integer multiple of eps (relative slack 1e-9).
std::vector<std::pair<int, double>> qfi_vs_atoms(const std::vector<int>& s_list,
                                                 double eps, double t,
                                                 const ModelParams& p);

} // namespace tcqfi::method2
