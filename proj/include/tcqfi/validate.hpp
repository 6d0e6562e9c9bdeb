#pragma once

#include <string>
#include <vector>

namespace tcqfi {

// Result of the structural-invariant battery: every density matrix the
// pipelines produce must pass trace/Hermiticity/positivity checks, every
// Kraus set must be trace preserving, every propagator unitary, and the
// independent formula-level oracles must agree.
struct ValidationOutcome {
    int checks = 0;
    int violations = 0;
    std::vector<std::string> lines; // one "ok ..." / "VIOLATION ..." per check

    bool passed() const { return violations == 0; }
};

// Deterministic: fixed parameter grids and a fixed RNG seed.
ValidationOutcome run_validation();

} // namespace tcqfi
