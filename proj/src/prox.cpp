#include "mctf/prox.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace mctf {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
SvdTriple<Scalar> svd_impl(const Mat<Scalar>& m) {
    Eigen::BDCSVD<Mat<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

template <typename Scalar>
void require_finite(const Mat<Scalar>& m, const char* who) {
    if (!m.allFinite()) throw ArgumentError(std::string(who) + ": input contains non-finite values");
}

// U diag(f(s)) V^H keeping only the components where f(s) > 0.
template <typename Scalar, typename Shrink>
Mat<Scalar> shrink_singular_values(const Mat<Scalar>& m, Shrink&& shrink) {
    if (m.size() == 0) return m;
    SvdTriple<Scalar> d = svd_impl<Scalar>(m);
    Index keep = 0;
    Eigen::VectorXd s(d.S.size());
    for (Index i = 0; i < d.S.size(); ++i) {
        s(i) = std::max(shrink(i, d.S(i)), 0.0);
        if (s(i) > 0.0) keep = i + 1;
    }
    if (keep == 0) return Mat<Scalar>::Zero(m.rows(), m.cols());
    return d.U.leftCols(keep) * s.head(keep).asDiagonal() * d.V.leftCols(keep).adjoint();
}

template <typename Scalar>
Mat<Scalar> svt_impl(const Mat<Scalar>& m, double delta) {
    if (!(delta >= 0.0)) throw ArgumentError("svt: threshold must be non-negative");
    require_finite(m, "svt");
    return shrink_singular_values(m, [delta](Index, double s) { return s - delta; });
}

template <typename Scalar>
Mat<Scalar> log_svt_impl(const Mat<Scalar>& m, double gamma, double eps) {
    if (!(gamma > 0.0)) throw ArgumentError("log_svt: gamma must be positive");
    if (!(eps > 0.0)) throw ArgumentError("log_svt: eps must be positive");
    require_finite(m, "log_svt");
    return shrink_singular_values(m, [gamma, eps](Index, double s) { return s - gamma / (s + eps); });
}

template <typename SliceOp>
Tensor3 fourier_slice_prox(const Tensor3& t, int mode, SliceOp&& op) {
    ComplexTensor3 spectrum = fft_mode(permute_to_mode3(t, mode), 3);
    for (Index q = 0; q < spectrum.dim(3); ++q) {
        auto slice = spectrum.slice(q);
        ComplexMatrix shrunk = op(ComplexMatrix(slice));
        slice = shrunk;
    }
    return permute_from_mode3(ifft_mode(spectrum, 3), mode);
}

template <typename SliceNorm>
double fourier_slice_average(const Tensor3& t, int mode, SliceNorm&& norm) {
    ComplexTensor3 spectrum = fft_mode(permute_to_mode3(t, mode), 3);
    const Index p = spectrum.dim(3);
    double sum = 0.0;
    for (Index q = 0; q < p; ++q) sum += norm(singular_values(ComplexMatrix(spectrum.slice(q))));
    return sum / static_cast<double>(p);
}

double log_sum(const Eigen::VectorXd& s, double eps) {
    double sum = 0.0;
    for (Index i = 0; i < s.size(); ++i) sum += std::log(std::abs(s(i)) + eps);
    return sum;
}

}  // namespace

SvdTriple<double> thin_svd(const Matrix& m) { return svd_impl<double>(m); }
SvdTriple<Complex> thin_svd(const ComplexMatrix& m) { return svd_impl<Complex>(m); }

Eigen::VectorXd singular_values(const Matrix& m) {
    return Eigen::BDCSVD<Matrix>(m).singularValues();
}
Eigen::VectorXd singular_values(const ComplexMatrix& m) {
    return Eigen::BDCSVD<ComplexMatrix>(m).singularValues();
}

Matrix svt(const Matrix& m, double delta) { return svt_impl<double>(m, delta); }
ComplexMatrix svt(const ComplexMatrix& m, double delta) { return svt_impl<Complex>(m, delta); }

Matrix log_svt(const Matrix& m, double gamma, double eps) { return log_svt_impl<double>(m, gamma, eps); }
ComplexMatrix log_svt(const ComplexMatrix& m, double gamma, double eps) {
    return log_svt_impl<Complex>(m, gamma, eps);
}

Tensor3 tnn_prox(const Tensor3& t, int mode, double delta) {
    if (!(delta >= 0.0)) throw ArgumentError("tnn_prox: threshold must be non-negative");
    return fourier_slice_prox(t, mode, [delta](const ComplexMatrix& s) { return svt(s, delta); });
}

Tensor3 log_tnn_prox(const Tensor3& t, int mode, double gamma, double eps) {
    if (!(gamma > 0.0)) throw ArgumentError("log_tnn_prox: gamma must be positive");
    if (!(eps > 0.0)) throw ArgumentError("log_tnn_prox: eps must be positive");
    return fourier_slice_prox(t, mode, [gamma, eps](const ComplexMatrix& s) { return log_svt(s, gamma, eps); });
}

double nuclear_norm(const Matrix& m) { return singular_values(m).sum(); }

double log_norm(const Matrix& m, double eps) { return log_sum(singular_values(m), eps); }

double tensor_nuclear_norm(const Tensor3& t, int mode) {
    return fourier_slice_average(t, mode, [](const Eigen::VectorXd& s) { return s.sum(); });
}

double tensor_log_norm(const Tensor3& t, int mode, double eps) {
    return fourier_slice_average(t, mode, [eps](const Eigen::VectorXd& s) { return log_sum(s, eps); });
}

}  // namespace mctf
