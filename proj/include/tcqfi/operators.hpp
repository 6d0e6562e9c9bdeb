#pragma once

#include "tcqfi/constants.hpp"
#include "tcqfi/types.hpp"

namespace tcqfi {

// Kronecker product, A indexing the slow factor and B the fast one. The
// atom-slow / field-fast convention is fixed repo-wide: joint basis index
// is a * field_dim + m.
CMat tensor_product(const CMat& A, const CMat& B);

CMat identity(Index dim);

// Truncated annihilation operator on dim Fock levels: a|m> = sqrt(m)|m-1>.
CMat destroy(Index dim);

// Symmetrizes (H + H^dag)/2 first; requires max|H - H^dag| below
// tol::hermitian_input. Eigenvalues ascending, deterministic for equal input.
EigenDecomposition hermitian_eig(const CMat& H);

// exp(-i H t) assembled from an eigendecomposition of H.
CMat unitary_from_eig(const EigenDecomposition& ed, double t);

// U rho U^dag with U = exp(-i H t).
DensityMatrix evolve(const DensityMatrix& rho, const CMat& H, double t);

// exp(-i H t) |psi>.
StateVector evolve_state(const StateVector& psi, const CMat& H, double t);

// Trace over the fast (field) factor.
DensityMatrix partial_trace_field(const DensityMatrix& rho, const HilbertDims& dims);

bool approx_equal(const CMat& A, const CMat& B, double tolerance);

double min_eigenvalue(const CMat& hermitian);

// base^e for integer e >= 0 by binary exponentiation (0^0 == 1).
cplx cpow_int(cplx base, long e);

// Throws NumericError if rho violates unit trace, Hermiticity, or positivity
// within the central tolerances. `where` labels the offending call site.
void assert_density(const DensityMatrix& rho, const std::string& where);

} // namespace tcqfi
