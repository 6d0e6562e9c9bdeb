#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcqfi {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

// Density matrices and state vectors are plain Eigen values; the invariants
// (trace, Hermiticity, positivity, norm) are enforced by checkers at module
// boundaries rather than by a wrapper type.
using DensityMatrix = CMat;
using StateVector = CVec;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct NumericError : Error {
    using Error::Error;
};

struct HilbertDims {
    Index atom_dim = 1;
    Index field_dim = 1;
    Index total() const { return atom_dim * field_dim; }
};

// Hermitian eigensystem: eigenvalues ascending, eigenvectors as orthonormal
// columns matching the eigenvalue order.
struct EigenDecomposition {
    RVec eigenvalues;
    CMat eigenvectors;
};

struct KrausSet {
    std::vector<CMat> operators; // act on the atomic factor only
    HilbertDims target_dims;
};

} // namespace tcqfi
