#pragma once

#include <cstdint>

// Central tolerance record. Tests and library code reference these symbols,
// never raw literals, so the numerical contract lives in one place.
namespace tcqfi::tol {

// structural contracts on density matrices
inline constexpr double trace = 1e-10;       // |Tr(rho) - 1|
inline constexpr double hermiticity = 1e-10; // max |rho - rho^dag|
inline constexpr double psd = 1e-9;          // min eigenvalue > -psd

// linear-algebra contracts
inline constexpr double orthonormal = 1e-10;   // V^dag V vs identity
inline constexpr double spectral = 1e-9;       // eigen reconstruction, relative
inline constexpr double hermitian_input = 1e-9; // caller-side Hermiticity bound
inline constexpr double unitary = 1e-9;        // propagator unitarity
inline constexpr double partial_trace = 1e-12;
inline constexpr double state_norm = 1e-12;
inline constexpr double kraus_complete = 1e-10;

// quantum Fisher information machinery
inline constexpr double qfi_cutoff = 1e-12;  // eigenvalue support floor
inline constexpr double qfi_clip = 1e-8;     // negative values above this are an error
inline constexpr double fd_scale = 1e-5;     // h = fd_scale * max(1, |tau0|)
inline constexpr double crossing_overlap2 = 0.5; // matched overlap^2 below this = crossing

// simulation guards
inline constexpr double leakage = 1e-6;      // truncation-boundary population abort level
inline constexpr double corner_band = 1e-6;  // corner-vs-population clip band before erroring
inline constexpr double bloch_excess = 1e-6; // Bloch norm above 1 + this is an error
inline constexpr double coherent_tail = 1e-10;
inline constexpr std::int64_t dim_cap = 1 << 16;

} // namespace tcqfi::tol
