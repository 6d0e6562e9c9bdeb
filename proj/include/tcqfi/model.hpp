#pragma once

#include <utility>

#include "tcqfi/types.hpp"

namespace tcqfi {

enum class FieldKind { Fock, Coherent };

// Initial cavity state. Fock levels are exact; coherent amplitudes may be complex.
struct FieldInit {
    FieldKind kind = FieldKind::Fock;
    int photon_number = 0;
    cplx alpha{0.0, 0.0};

    static FieldInit fock(int n) {
        FieldInit f;
        f.kind = FieldKind::Fock;
        f.photon_number = n;
        return f;
    }
    static FieldInit coherent(cplx a) {
        FieldInit f;
        f.kind = FieldKind::Coherent;
        f.alpha = a;
        return f;
    }
};

enum class Basis { Full, Collective };

struct ModelParams {
    int s = 3;            // atom count
    double omega_c = 0.0; // cavity angular frequency
    double omega_a = 0.0; // atomic angular frequency
    double Omega = 0.0;   // coupling angular frequency
    FieldInit field_init{};
    int n_max = -1;       // Fock truncation level; negative requests the default

    // detuning is always derived, never stored
    double delta() const { return omega_a - omega_c; }
    double n_eff() const;
    int default_n_max() const;

    // copy with n_max filled in (when unset) and all invariants checked
    ModelParams resolved() const;
    void validate() const;

    int field_dim() const { return n_max + 1; }
    int atom_dim(Basis b) const;
    HilbertDims dims(Basis b) const;
};

// Collective spin operators on the (s+1)-dimensional symmetric basis,
// ordered by ascending S_z eigenvalue (k excited atoms -> eigenvalue 2k-s).
struct CollectiveOperators {
    CMat S_z;
    CMat S_plus;
    CMat S_minus;
};

CollectiveOperators collective_operators(int s);

// Full product-basis Hamiltonian on 2^s x (n_max+1), atom index slow.
CMat build_full_hamiltonian(const ModelParams& p);

// Commuting split on the collective space: first = omega_c*(a^dag a + S_z/2),
// second = delta*S_z/2 + (Omega/2)(a S_+ + a^dag S_-).
std::pair<CMat, CMat> build_collective_hamiltonians(const ModelParams& p);
CMat build_collective_hamiltonian(const ModelParams& p);

StateVector ghz_state(int s);       // 2^s product basis
StateVector ghz_collective(int s);  // (s+1) collective basis
StateVector field_state(const ModelParams& p);

StateVector initial_state(const ModelParams& p, Basis basis = Basis::Full);
DensityMatrix initial_density(const ModelParams& p, Basis basis = Basis::Full);

// Isometry from the (s+1)-dim symmetric space into the 2^s product space.
// Column k spreads uniformly over all weight-k bit strings.
CMat symmetric_embedding(int s);

double binomial(int n, int k);

} // namespace tcqfi
