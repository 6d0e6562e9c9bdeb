#pragma once

#include <functional>

#include "tcqfi/constants.hpp"
#include "tcqfi/types.hpp"

namespace tcqfi {

using DensityFamily = std::function<DensityMatrix(double)>;

struct QfiResult {
    double parameter_value = 0.0;
    double value = 0.0;          // clipped to 0 when within -1e-8 of zero
    double fd_step = 0.0;
    double support_cutoff = 0.0;
};

// default finite-difference step, scaled to the parameter magnitude
double default_fd_step(double tau0);

// Quantum Fisher information from the spectral decomposition of rho(tau).
// Eigenvalue/eigenvector derivatives come from central differences; stencil
// eigenvectors are aligned to the center by maximal overlap with the phase
// fixed so the overlap is real positive. An overlap-squared below 0.5 means
// the branches cannot be followed and raises NumericError (shrink h).
QfiResult qfi_spectral(const DensityFamily& rho_at, double tau0, double h, double cutoff);
QfiResult qfi_spectral(const DensityFamily& rho_at, double tau0);

// Independent cross-check: solve rho L + L rho = 2 drho in the eigenbasis of
// rho and return Tr(rho L^2). Pairs with eigenvalue sum below cutoff drop out.
double sld_oracle(const DensityMatrix& rho, const CMat& drho, double cutoff = tol::qfi_cutoff);

// 4(<dpsi|dpsi> - |<psi|dpsi>|^2) for pure families
double pure_state_qfi(const StateVector& psi, const StateVector& dpsi);

// convenience central difference of a density family
CMat central_difference(const DensityFamily& rho_at, double tau0, double h);

} // namespace tcqfi
