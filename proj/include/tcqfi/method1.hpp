#pragma once

#include <vector>

#include "tcqfi/model.hpp"
#include "tcqfi/types.hpp"

namespace tcqfi::method1 {

// Pipeline built on the pinned-cavity reduction: the field stays at Fock
// level n, atoms see a c-number drive, and every entry of the reduced state
// has a closed form.

// Rabi data at photon number n: Delta = sqrt(delta^2 + (n+1) Omega^2) and the
// per-atom flip probability chi(t) = ((n+1) Omega^2 / Delta^2) sin^2(Delta t/2).
struct RabiParams {
    double Delta = 0.0;
    double amp2 = 0.0; // (n+1) Omega^2
    double chi(double t) const;
};

RabiParams rabi_params(const ModelParams& p);

double chi(double t, const ModelParams& p);

// First-power sine variant as printed in the source derivation; it can go
// negative, so it is exposed for documentation and never used in the pipeline.
double chi_printed(double t, const ModelParams& p);

struct CollectivePropagator {
    CMat matrix;       // (s+1)x(s+1) unitary
    int photon_number; // Fock level the c-number amplitude was taken at
};

// exp(-i t [delta S_z/2 + (Omega sqrt(n+1)/2)(S_+ + S_-)]). The sqrt(n+1)
// amplitude keeps |U_00|^2 = (1-chi)^s exact, which the corner-vs-diagonal
// positivity bound in corrected_density relies on.
CollectivePropagator collective_propagator(double t, const ModelParams& p);

// Closed-form reduced state of three atoms after uncorrected evolution.
DensityMatrix uncorrected_entries(double eps, const ModelParams& p);

// Corner coherence after eta corrections spaced eps apart plus residual tau.
cplx corrected_corner(long eta, double eps, double tau, const ModelParams& p);

// Full (s+1)-dim reduced state under the same schedule: binomial diagonal at
// the residual time plus the corrected corner.
DensityMatrix corrected_density(long eta, double eps, double tau, const ModelParams& p);

// rho_kk = C(s,k)/2 [chi^k (1-chi)^(s-k) + chi^(s-k) (1-chi)^k], chi = chi(tau)
std::vector<double> s_atom_diagonal(int s, double tau, const ModelParams& p);

// leading-order error rate (s/4)(n+1) Omega^2 eps
double error_rate_law(double eps, const ModelParams& p);

// The corner prefactor closed form as printed in the source derivation.
// Kept for documentation only: it does not reduce to 1/2 at eps -> 0 and is
// singular at eps = 0; the operator-product corrected_corner is the
// load-bearing path.
cplx p14_printed(double eps, const ModelParams& p);

} // namespace tcqfi::method1
