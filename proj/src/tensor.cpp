#include "mctf/tensor.hpp"

#include <fftw3.h>

#include <climits>
#include <cmath>
#include <mutex>

namespace mctf {

namespace {

// Column index of (i, j, k) in the mode-`mode` unfolding.
inline Index unfold_column(const Shape& s, int mode, Index i, Index j, Index k) {
    switch (mode) {
        case 1: return j + s[1] * k;
        case 2: return i + s[0] * k;
        default: return i + s[0] * j;
    }
}

inline Index unfold_row(int mode, Index i, Index j, Index k) {
    return mode == 1 ? i : (mode == 2 ? j : k);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> unfold_impl(const BasicTensor3<Scalar>& t, int mode) {
    check_mode(mode);
    const Shape& s = t.shape();
    const Index rows = t.dim(mode);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, t.size() / rows);
    for (Index k = 0; k < s[2]; ++k)
        for (Index j = 0; j < s[1]; ++j)
            for (Index i = 0; i < s[0]; ++i)
                m(unfold_row(mode, i, j, k), unfold_column(s, mode, i, j, k)) = t(i, j, k);
    return m;
}

template <typename Scalar>
BasicTensor3<Scalar> permute_to_impl(const BasicTensor3<Scalar>& t, int k) {
    check_mode(k);
    const Shape& s = t.shape();
    if (k == 3) return t;
    if (k == 1) {
        BasicTensor3<Scalar> p({s[1], s[2], s[0]});
        for (Index c = 0; c < s[2]; ++c)
            for (Index b = 0; b < s[1]; ++b)
                for (Index a = 0; a < s[0]; ++a) p(b, c, a) = t(a, b, c);
        return p;
    }
    BasicTensor3<Scalar> p({s[2], s[0], s[1]});
    for (Index c = 0; c < s[2]; ++c)
        for (Index b = 0; b < s[1]; ++b)
            for (Index a = 0; a < s[0]; ++a) p(c, a, b) = t(a, b, c);
    return p;
}

template <typename Scalar>
BasicTensor3<Scalar> permute_from_impl(const BasicTensor3<Scalar>& p, int k) {
    check_mode(k);
    const Shape& s = p.shape();
    if (k == 3) return p;
    if (k == 1) {
        // p has shape (I2, I3, I1)
        BasicTensor3<Scalar> t({s[2], s[0], s[1]});
        for (Index c = 0; c < s[1]; ++c)
            for (Index b = 0; b < s[0]; ++b)
                for (Index a = 0; a < s[2]; ++a) t(a, b, c) = p(b, c, a);
        return t;
    }
    // p has shape (I3, I1, I2)
    BasicTensor3<Scalar> t({s[1], s[2], s[0]});
    for (Index c = 0; c < s[0]; ++c)
        for (Index b = 0; b < s[2]; ++b)
            for (Index a = 0; a < s[1]; ++a) t(a, b, c) = p(c, a, b);
    return t;
}

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Unnormalized in-place DFT of every fiber along `mode`. The FFTW planner is
// not thread-safe, so planning and destruction are serialized; execution is
// not. FFTW_UNALIGNED keeps the chosen codelets, and hence the rounding,
// independent of where the buffer happens to be allocated.
void transform_fibers(ComplexTensor3& t, int mode, int sign) {
    const Shape& s = t.shape();
    for (Index d : s)
        if (d > INT_MAX || t.size() > INT_MAX) throw ArgumentError("tensor too large for the FFT");
    const int i1 = static_cast<int>(s[0]), i2 = static_cast<int>(s[1]), i3 = static_cast<int>(s[2]);
    fftw_iodim dim{};
    fftw_iodim loops[2]{};
    int loop_rank = 1;
    if (mode == 1) {
        dim = {i1, 1, 1};
        loops[0] = {i2 * i3, i1, i1};
    } else if (mode == 2) {
        dim = {i2, i1, i1};
        loops[0] = {i1, 1, 1};
        loops[1] = {i3, i1 * i2, i1 * i2};
        loop_rank = 2;
    } else {
        dim = {i3, i1 * i2, i1 * i2};
        loops[0] = {i1 * i2, 1, 1};
    }
    auto* buf = reinterpret_cast<fftw_complex*>(t.data().data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_guru_dft(1, &dim, loop_rank, loops, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (plan == nullptr) throw NumericalError("FFT planning failed");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace

void check_mode(int mode) {
    if (mode < 1 || mode > 3) throw ArgumentError("mode must be 1, 2 or 3, got " + std::to_string(mode));
}

Shape with_dim(Shape shape, int mode, Index extent) {
    check_mode(mode);
    shape[static_cast<std::size_t>(mode - 1)] = extent;
    return shape;
}

Matrix unfold(const Tensor3& t, int mode) { return unfold_impl(t, mode); }
ComplexMatrix unfold(const ComplexTensor3& t, int mode) { return unfold_impl(t, mode); }

Tensor3 fold(const Matrix& m, int mode, const Shape& shape) {
    check_mode(mode);
    Tensor3 t(shape);
    const Index rows = t.dim(mode);
    if (m.rows() != rows || m.cols() != t.size() / rows)
        throw ArgumentError("fold: matrix dimensions do not match shape for this mode");
    for (Index k = 0; k < shape[2]; ++k)
        for (Index j = 0; j < shape[1]; ++j)
            for (Index i = 0; i < shape[0]; ++i)
                t(i, j, k) = m(unfold_row(mode, i, j, k), unfold_column(shape, mode, i, j, k));
    return t;
}

Tensor3 mode_n_product(const Tensor3& t, const Matrix& m, int mode) {
    check_mode(mode);
    const Shape& s = t.shape();
    if (m.cols() != t.dim(mode)) throw ArgumentError("mode_n_product: matrix columns must equal I_mode");
    Tensor3 out(with_dim(s, mode, m.rows()));
    using ConstMap = Eigen::Map<const Matrix>;
    using Map = Eigen::Map<Matrix>;
    switch (mode) {
        case 1: {
            ConstMap src(t.data().data(), s[0], s[1] * s[2]);
            Map dst(out.data().data(), m.rows(), s[1] * s[2]);
            dst.noalias() = m * src;
            break;
        }
        case 2:
            for (Index k = 0; k < s[2]; ++k) out.slice(k).noalias() = t.slice(k) * m.transpose();
            break;
        default: {
            ConstMap src(t.data().data(), s[0] * s[1], s[2]);
            Map dst(out.data().data(), s[0] * s[1], m.rows());
            dst.noalias() = src * m.transpose();
            break;
        }
    }
    return out;
}

Tensor3 permute_to_mode3(const Tensor3& t, int k) { return permute_to_impl(t, k); }
ComplexTensor3 permute_to_mode3(const ComplexTensor3& t, int k) { return permute_to_impl(t, k); }
Tensor3 permute_from_mode3(const Tensor3& t, int k) { return permute_from_impl(t, k); }
ComplexTensor3 permute_from_mode3(const ComplexTensor3& t, int k) { return permute_from_impl(t, k); }

ComplexTensor3 fft_mode(const Tensor3& t, int mode) {
    check_mode(mode);
    ComplexTensor3 out(t.shape());
    for (Index i = 0; i < t.size(); ++i) out[i] = t[i];
    transform_fibers(out, mode, FFTW_FORWARD);
    return out;
}

Tensor3 ifft_mode(const ComplexTensor3& t, int mode) {
    check_mode(mode);
    ComplexTensor3 work = t;
    transform_fibers(work, mode, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(t.dim(mode));
    Tensor3 out(t.shape());
    double imag_sq = 0.0, total_sq = 0.0;
    for (Index i = 0; i < t.size(); ++i) {
        const Complex v = work[i] * scale;
        out[i] = v.real();
        imag_sq += v.imag() * v.imag();
        total_sq += std::norm(v);
    }
    if (std::sqrt(imag_sq) > 1e-6 * std::sqrt(total_sq))
        throw NumericalError("ifft_mode: inverse transform is not real (conjugate symmetry broken)");
    return out;
}

double inner(const Tensor3& a, const Tensor3& b) {
    if (a.shape() != b.shape()) throw ArgumentError("inner: shape mismatch");
    return a.vec().dot(b.vec());
}

double fro_norm(const Tensor3& t) { return t.vec().norm(); }
double fro_norm(const ComplexTensor3& t) { return t.vec().norm(); }

bool all_finite(const Tensor3& t) { return t.vec().allFinite(); }

}  // namespace mctf
