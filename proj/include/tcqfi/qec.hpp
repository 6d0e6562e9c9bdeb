#pragma once

#include "tcqfi/types.hpp"

namespace tcqfi {

// Bit-flip correction channels. Kraus operators are stored on the atomic
// factor only (target_dims.field_dim == 1) and are extended by the identity
// on the field when applied to a joint-space density matrix.

// Explicit 3-atom map {P0, X1 P1, X2 P2, X3 P3} on the 8-dim product basis.
KrausSet three_qubit_correction();

// Majority-rule generalization: one Kraus operator per flip pattern of weight
// <= (s-1)/2, each sending the pattern applied to either codeword back to that
// codeword. s must be odd (ties are undefined) and at most 13; note the dense
// operator count grows as 2^(s-1) so large s is expensive.
KrausSet majority_correction(int s);

// Same channel reduced to the (s+1)-dim collective basis: level k goes to
// level 0 below the midpoint and to level s above it, corners survive.
KrausSet collective_correction(int s);

// Sum_k K rho K^dag. When rho lives on atoms x field, the operators are
// extended blockwise by the field identity.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausSet& ch);

// max-abs deviation of Sum_k K^dag K from the identity
double completeness_error(const KrausSet& ch);

} // namespace tcqfi
