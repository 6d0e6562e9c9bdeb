#include "tcqfi/operators.hpp"

#include <cmath>

namespace tcqfi {

CMat tensor_product(const CMat& A, const CMat& B) {
    const Index rows = A.rows() * B.rows();
    const Index cols = A.cols() * B.cols();
    if (rows > tol::dim_cap || cols > tol::dim_cap)
        throw DimensionError("tensor_product: dimension " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " exceeds cap " + std::to_string(tol::dim_cap) +
                             " (check truncation settings)");
    CMat out(rows, cols);
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

CMat identity(Index dim) { return CMat::Identity(dim, dim); }

CMat destroy(Index dim) {
    CMat a = CMat::Zero(dim, dim);
    for (Index m = 1; m < dim; ++m) a(m - 1, m) = std::sqrt(double(m));
    return a;
}

EigenDecomposition hermitian_eig(const CMat& H) {
    if (H.rows() != H.cols())
        throw DimensionError("hermitian_eig: matrix is not square");
    const double herm_defect = (H - H.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > tol::hermitian_input)
        throw ValidationError("hermitian_eig: input is not Hermitian, max|H - H^dag| = " +
                              std::to_string(herm_defect));
    CMat sym = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericError("hermitian_eig: eigensolver failed to converge on a " +
                           std::to_string(H.rows()) + "-dimensional matrix");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

CMat unitary_from_eig(const EigenDecomposition& ed, double t) {
    const Index n = ed.eigenvalues.size();
    CVec phases(n);
    for (Index k = 0; k < n; ++k)
        phases(k) = std::exp(cplx(0.0, -ed.eigenvalues(k) * t));
    return ed.eigenvectors * phases.asDiagonal() * ed.eigenvectors.adjoint();
}

DensityMatrix evolve(const DensityMatrix& rho, const CMat& H, double t) {
    if (rho.rows() != H.rows() || rho.cols() != H.cols())
        throw DimensionError("evolve: state is " + std::to_string(rho.rows()) +
                             "-dimensional but generator is " + std::to_string(H.rows()));
    const CMat U = unitary_from_eig(hermitian_eig(H), t);
    return U * rho * U.adjoint();
}

StateVector evolve_state(const StateVector& psi, const CMat& H, double t) {
    if (psi.size() != H.rows())
        throw DimensionError("evolve_state: dimension mismatch");
    return unitary_from_eig(hermitian_eig(H), t) * psi;
}

DensityMatrix partial_trace_field(const DensityMatrix& rho, const HilbertDims& dims) {
    if (rho.rows() != dims.total() || rho.cols() != dims.total())
        throw DimensionError("partial_trace_field: state dimension " + std::to_string(rho.rows()) +
                             " does not equal atom_dim*field_dim = " + std::to_string(dims.total()));
    const Index A = dims.atom_dim, F = dims.field_dim;
    DensityMatrix out = DensityMatrix::Zero(A, A);
    for (Index a = 0; a < A; ++a)
        for (Index b = 0; b < A; ++b) {
            cplx sum = 0.0;
            for (Index m = 0; m < F; ++m) sum += rho(a * F + m, b * F + m);
            out(a, b) = sum;
        }
    return out;
}

bool approx_equal(const CMat& A, const CMat& B, double tolerance) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) return false;
    if (A.size() == 0) return true;
    return (A - B).cwiseAbs().maxCoeff() <= tolerance;
}

double min_eigenvalue(const CMat& hermitian) {
    return hermitian_eig(hermitian).eigenvalues.minCoeff();
}

cplx cpow_int(cplx base, long e) {
    cplx acc(1.0, 0.0);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

void assert_density(const DensityMatrix& rho, const std::string& where) {
    const double tr_defect = std::abs(rho.trace() - cplx(1.0, 0.0));
    if (tr_defect > tol::trace)
        throw NumericError(where + ": trace deviates from 1 by " + std::to_string(tr_defect));
    const double herm_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > tol::hermiticity)
        throw NumericError(where + ": Hermiticity defect " + std::to_string(herm_defect));
    const double lam_min = min_eigenvalue(rho);
    if (lam_min < -tol::psd)
        throw NumericError(where + ": negative eigenvalue " + std::to_string(lam_min));
}

} // namespace tcqfi
