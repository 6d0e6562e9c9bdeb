#include "tcqfi/model.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "tcqfi/constants.hpp"
#include "tcqfi/operators.hpp"

namespace tcqfi {

namespace {

int popcount_index(Index a) { return std::popcount(static_cast<unsigned long long>(a)); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

} // namespace

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

double ModelParams::n_eff() const {
    if (field_init.kind == FieldKind::Fock) return static_cast<double>(field_init.photon_number);
    return std::norm(field_init.alpha);
}

int ModelParams::default_n_max() const {
    if (field_init.kind == FieldKind::Fock) return field_init.photon_number + s + 3;
    double am = std::abs(field_init.alpha);
    return static_cast<int>(std::ceil(am * am + 10.0 * am + 20.0));
}

ModelParams ModelParams::resolved() const {
    ModelParams q = *this;
    if (q.n_max < 0) q.n_max = q.default_n_max();
    q.validate();
    return q;
}

void ModelParams::validate() const {
    require(s >= 1, "atom count must be at least 1");
    require(std::isfinite(omega_c) && std::isfinite(omega_a) && std::isfinite(Omega),
            "frequencies must be finite");
    require(n_max >= 0, "truncation level must be non-negative (call resolved() for the default)");
    if (field_init.kind == FieldKind::Fock) {
        require(field_init.photon_number >= 0, "Fock photon number must be non-negative");
        require(field_init.photon_number + s <= n_max,
                "truncation too low: need n + s <= n_max so excitation shells stay inside the space");
    } else {
        double am = std::abs(field_init.alpha);
        require(std::isfinite(am), "coherent amplitude must be finite");
        require(static_cast<double>(n_max) >= am * am + 10.0 * am + 20.0,
                "truncation too low for coherent field: need n_max >= |alpha|^2 + 10|alpha| + 20");
    }
}

int ModelParams::atom_dim(Basis b) const {
    if (b == Basis::Collective) return s + 1;
    require(s <= 20, "product basis too large");
    return 1 << s;
}

HilbertDims ModelParams::dims(Basis b) const {
    return HilbertDims{atom_dim(b), field_dim()};
}

CollectiveOperators collective_operators(int s) {
    if (s < 1) throw ValidationError("atom count must be at least 1");
    int d = s + 1;
    CollectiveOperators ops;
    ops.S_z = CMat::Zero(d, d);
    ops.S_plus = CMat::Zero(d, d);
    for (int k = 0; k < d; ++k) ops.S_z(k, k) = cplx(static_cast<double>(2 * k - s), 0.0);
    for (int k = 0; k + 1 < d; ++k) {
        double w = std::sqrt(static_cast<double>((s - k) * (k + 1)));
        ops.S_plus(k + 1, k) = cplx(w, 0.0);
    }
    ops.S_minus = ops.S_plus.adjoint();
    return ops;
}

CMat build_full_hamiltonian(const ModelParams& params) {
    ModelParams p = params.resolved();
    HilbertDims hd = p.dims(Basis::Full);
    if (hd.total() > tol::dim_cap) throw DimensionError("full Hamiltonian dimension exceeds cap");
    int A = hd.atom_dim;
    int F = hd.field_dim;

    CMat a = destroy(F);
    CMat num = a.adjoint() * a;

    // diagonal atomic part: sum_j sigma_z^(j) has eigenvalue 2*popcount - s
    CMat sz_sum = CMat::Zero(A, A);
    for (Index i = 0; i < A; ++i)
        sz_sum(i, i) = cplx(static_cast<double>(2 * popcount_index(i) - p.s), 0.0);

    CMat h = tensor_product((0.5 * p.omega_a) * sz_sum, CMat::Identity(F, F));
    h += tensor_product(CMat::Identity(A, A), p.omega_c * num);

    // exchange coupling, one term per atom; atom 0 owns the most significant bit
    for (int j = 0; j < p.s; ++j) {
        Index bit = Index(1) << (p.s - 1 - j);
        CMat sp = CMat::Zero(A, A);
        for (Index i = 0; i < A; ++i)
            if (!(i & bit)) sp(i | bit, i) = cplx(1.0, 0.0);
        h += tensor_product((0.5 * p.Omega) * sp, a);
        h += tensor_product((0.5 * p.Omega) * sp.adjoint(), a.adjoint());
    }
    return h;
}

std::pair<CMat, CMat> build_collective_hamiltonians(const ModelParams& params) {
    ModelParams p = params.resolved();
    int F = p.field_dim();
    int d = p.s + 1;
    CollectiveOperators ops = collective_operators(p.s);
    CMat a = destroy(F);
    CMat num = a.adjoint() * a;
    CMat id_a = CMat::Identity(d, d);
    CMat id_f = CMat::Identity(F, F);

    CMat h1 = p.omega_c * (tensor_product(id_a, num) + tensor_product(0.5 * ops.S_z, id_f));
    CMat h2 = tensor_product((0.5 * p.delta()) * ops.S_z, id_f);
    h2 += tensor_product((0.5 * p.Omega) * ops.S_plus, a);
    h2 += tensor_product((0.5 * p.Omega) * ops.S_minus, a.adjoint());
    return {h1, h2};
}

CMat build_collective_hamiltonian(const ModelParams& p) {
    auto [h1, h2] = build_collective_hamiltonians(p);
    return h1 + h2;
}

StateVector ghz_state(int s) {
    if (s < 1) throw ValidationError("atom count must be at least 1");
    if (s > 20) throw DimensionError("product basis too large");
    Index dim = Index(1) << s;
    StateVector v = StateVector::Zero(dim);
    double amp = 1.0 / std::sqrt(2.0);
    v(0) = cplx(amp, 0.0);
    v(dim - 1) = cplx(amp, 0.0);
    return v;
}

StateVector ghz_collective(int s) {
    if (s < 1) throw ValidationError("atom count must be at least 1");
    StateVector v = StateVector::Zero(s + 1);
    double amp = 1.0 / std::sqrt(2.0);
    v(0) = cplx(amp, 0.0);
    v(s) = cplx(amp, 0.0);
    return v;
}

StateVector field_state(const ModelParams& params) {
    ModelParams p = params.resolved();
    int F = p.field_dim();
    StateVector v = StateVector::Zero(F);
    if (p.field_init.kind == FieldKind::Fock) {
        v(p.field_init.photon_number) = cplx(1.0, 0.0);
        return v;
    }
    cplx alpha = p.field_init.alpha;
    // stable recurrence c_m = c_{m-1} * alpha / sqrt(m)
    cplx c = cplx(std::exp(-0.5 * std::norm(alpha)), 0.0);
    v(0) = c;
    for (int m = 1; m < F; ++m) {
        c *= alpha / std::sqrt(static_cast<double>(m));
        v(m) = c;
    }
    double norm2 = v.squaredNorm();
    if (std::abs(1.0 - norm2) >= tol::coherent_tail)
        throw ValidationError("coherent-state truncation tail exceeds tolerance");
    v /= std::sqrt(norm2);
    return v;
}

StateVector initial_state(const ModelParams& params, Basis basis) {
    ModelParams p = params.resolved();
    StateVector atoms = (basis == Basis::Full) ? ghz_state(p.s) : ghz_collective(p.s);
    StateVector field = field_state(p);
    Index A = atoms.size();
    Index F = field.size();
    StateVector v(A * F);
    for (Index i = 0; i < A; ++i)
        for (Index m = 0; m < F; ++m) v(i * F + m) = atoms(i) * field(m);
    return v;
}

DensityMatrix initial_density(const ModelParams& p, Basis basis) {
    StateVector v = initial_state(p, basis);
    return v * v.adjoint();
}

CMat symmetric_embedding(int s) {
    if (s < 1) throw ValidationError("atom count must be at least 1");
    if (s > 20) throw DimensionError("product basis too large");
    Index dim = Index(1) << s;
    CMat v = CMat::Zero(dim, s + 1);
    for (Index i = 0; i < dim; ++i) {
        int k = popcount_index(i);
        v(i, k) = cplx(1.0 / std::sqrt(binomial(s, k)), 0.0);
    }
    return v;
}

} // namespace tcqfi
