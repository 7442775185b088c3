#pragma once

#include "mctf/tensor.hpp"

namespace mctf {

/// Thin SVD M = U diag(S) V^H with S non-increasing.
template <typename Scalar>
struct SvdTriple {
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    MatrixType U;
    Eigen::VectorXd S;
    MatrixType V;

    MatrixType reconstruct() const { return U * S.asDiagonal() * V.adjoint(); }
};

SvdTriple<double> thin_svd(const Matrix& m);
SvdTriple<Complex> thin_svd(const ComplexMatrix& m);

/// Singular values of m (non-increasing).
Eigen::VectorXd singular_values(const Matrix& m);
Eigen::VectorXd singular_values(const ComplexMatrix& m);

/// Singular value soft-thresholding D_delta(M) = U diag(max(s - delta, 0)) V^H,
/// the proximal map of delta * nuclear norm.
Matrix svt(const Matrix& m, double delta);
ComplexMatrix svt(const ComplexMatrix& m, double delta);

/// Weighted singular value thresholding for the log penalty: each singular
/// value s_j shrinks by gamma * d_j with d_j = 1 / (s_j + eps). Weights are
/// non-decreasing because s is non-increasing.
Matrix log_svt(const Matrix& m, double gamma, double eps);
ComplexMatrix log_svt(const ComplexMatrix& m, double gamma, double eps);

/// Proximal map of delta * TNN along `mode`: rotate `mode` to the third
/// position, DFT along it, soft-threshold every frontal slice, invert.
Tensor3 tnn_prox(const Tensor3& t, int mode, double delta);
/// As tnn_prox with log_svt applied to each Fourier slice.
Tensor3 log_tnn_prox(const Tensor3& t, int mode, double gamma, double eps);

double nuclear_norm(const Matrix& m);
/// sum_i log(s_i + eps) over all min(rows, cols) singular values.
double log_norm(const Matrix& m, double eps);

/// Transform-domain TNN: (1/p) sum of nuclear norms of the Fourier slices,
/// where p is the extent of `mode`.
double tensor_nuclear_norm(const Tensor3& t, int mode);
/// (1/p) sum of log norms of the Fourier slices.
double tensor_log_norm(const Tensor3& t, int mode, double eps);

}  // namespace mctf
