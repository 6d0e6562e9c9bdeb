#include "tcqfi/qec.hpp"

#include <bit>

#include "tcqfi/constants.hpp"

namespace tcqfi {

namespace {

int weight(Index e) { return std::popcount(static_cast<unsigned long long>(e)); }

} // namespace

KrausSet three_qubit_correction() {
    KrausSet ch;
    ch.target_dims = HilbertDims{8, 1};
    CMat p0 = CMat::Zero(8, 8);
    p0(0, 0) = 1.0;
    p0(7, 7) = 1.0;
    ch.operators.push_back(p0);
    // X_i P_i collapses the two weight-compatible flip patterns of atom i;
    // atom 1 owns the most significant bit
    const Index flipped_from_zero[3] = {4, 2, 1};
    for (Index e : flipped_from_zero) {
        CMat k = CMat::Zero(8, 8);
        k(0, e) = 1.0;
        k(7, 7 - e) = 1.0;
        ch.operators.push_back(k);
    }
    return ch;
}

KrausSet majority_correction(int s) {
    if (s < 3 || s % 2 == 0) throw ValidationError("majority correction needs odd s >= 3");
    if (s > 13) throw DimensionError("product-basis correction capped at 13 atoms");
    Index dim = Index(1) << s;
    Index all_ones = dim - 1;
    int max_w = (s - 1) / 2;
    KrausSet ch;
    ch.target_dims = HilbertDims{static_cast<int>(dim), 1};
    for (int w = 0; w <= max_w; ++w) {
        for (Index e = 0; e < dim; ++e) {
            if (weight(e) != w) continue;
            CMat k = CMat::Zero(dim, dim);
            k(0, e) = 1.0;
            k(all_ones, all_ones ^ e) = 1.0;
            ch.operators.push_back(std::move(k));
        }
    }
    return ch;
}

KrausSet collective_correction(int s) {
    if (s < 1 || s % 2 == 0) throw ValidationError("collective correction needs odd s");
    int d = s + 1;
    KrausSet ch;
    ch.target_dims = HilbertDims{d, 1};
    for (int k = 0; k <= (s - 1) / 2; ++k) {
        CMat q = CMat::Zero(d, d);
        q(0, k) = 1.0;
        q(s, s - k) = 1.0;
        ch.operators.push_back(std::move(q));
    }
    return ch;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausSet& ch) {
    Index a_dim = ch.target_dims.atom_dim;
    Index d = rho.rows();
    if (rho.cols() != d) throw DimensionError("density matrix must be square");
    if (d % a_dim != 0)
        throw DimensionError("density matrix dimension is not a multiple of the channel dimension");
    Index f = d / a_dim;

    DensityMatrix out = DensityMatrix::Zero(d, d);
    if (f == 1) {
        for (const CMat& k : ch.operators) out += k * rho * k.adjoint();
    } else {
        // extend each Kraus operator by the field identity without forming the
        // tensor product: one row pass, one column pass over f x f blocks
        CMat t(d, d);
        for (const CMat& k : ch.operators) {
            t.setZero();
            for (Index i = 0; i < a_dim; ++i)
                for (Index a = 0; a < a_dim; ++a) {
                    cplx w = k(i, a);
                    if (w == cplx(0.0, 0.0)) continue;
                    t.middleRows(i * f, f) += w * rho.middleRows(a * f, f);
                }
            for (Index j = 0; j < a_dim; ++j)
                for (Index b = 0; b < a_dim; ++b) {
                    cplx w = std::conj(k(j, b));
                    if (w == cplx(0.0, 0.0)) continue;
                    out.middleCols(j * f, f) += w * t.middleCols(b * f, f);
                }
        }
    }
    DensityMatrix herm = 0.5 * (out + out.adjoint());
    return herm;
}

double completeness_error(const KrausSet& ch) {
    Index a_dim = ch.target_dims.atom_dim;
    CMat acc = CMat::Zero(a_dim, a_dim);
    for (const CMat& k : ch.operators) acc += k.adjoint() * k;
    return (acc - CMat::Identity(a_dim, a_dim)).cwiseAbs().maxCoeff();
}

} // namespace tcqfi
