#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "mctf/errors.hpp"

namespace mctf {

using Index = Eigen::Index;
using Shape = std::array<Index, 3>;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Dense third-order tensor stored with the first index varying fastest,
/// the same convention as Eigen's column-major matrices. With this layout the
/// mode-1 unfolding is a plain reshape and each frontal slice is a contiguous
/// column-major block.
template <typename Scalar>
class BasicTensor3 {
public:
    using value_type = Scalar;
    using SliceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    BasicTensor3() = default;

    explicit BasicTensor3(Shape shape) : shape_(checked(shape)), data_(count(shape_), Scalar(0)) {}

    BasicTensor3(Shape shape, std::vector<Scalar> data) : shape_(checked(shape)), data_(std::move(data)) {
        if (static_cast<Index>(data_.size()) != count(shape_))
            throw ArgumentError("tensor buffer length does not match shape");
    }

    static BasicTensor3 zeros(Shape shape) { return BasicTensor3(shape); }

    static BasicTensor3 constant(Shape shape, Scalar value) {
        BasicTensor3 t(shape);
        std::fill(t.data_.begin(), t.data_.end(), value);
        return t;
    }

    const Shape& shape() const noexcept { return shape_; }
    /// Extent of `mode` (1, 2 or 3).
    Index dim(int mode) const { return shape_.at(static_cast<std::size_t>(mode - 1)); }
    Index size() const noexcept { return static_cast<Index>(data_.size()); }
    bool empty() const noexcept { return data_.empty(); }

    Scalar& operator()(Index i, Index j, Index k) { return data_[offset(i, j, k)]; }
    const Scalar& operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }
    Scalar& operator[](Index flat) { return data_[static_cast<std::size_t>(flat)]; }
    const Scalar& operator[](Index flat) const { return data_[static_cast<std::size_t>(flat)]; }

    Index offset(Index i, Index j, Index k) const noexcept {
        return i + shape_[0] * (j + shape_[1] * k);
    }

    std::span<Scalar> data() noexcept { return data_; }
    std::span<const Scalar> data() const noexcept { return data_; }
    const std::vector<Scalar>& buffer() const noexcept { return data_; }

    /// Whole buffer as an Eigen vector view.
    Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> vec() { return {data_.data(), size()}; }
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> vec() const { return {data_.data(), size()}; }

    /// k-th frontal slice (I1 x I2), zero-based k.
    Eigen::Map<SliceMatrix> slice(Index k) {
        return {data_.data() + k * shape_[0] * shape_[1], shape_[0], shape_[1]};
    }
    Eigen::Map<const SliceMatrix> slice(Index k) const {
        return {data_.data() + k * shape_[0] * shape_[1], shape_[0], shape_[1]};
    }

    BasicTensor3& operator+=(const BasicTensor3& o) {
        require_same_shape(o);
        vec() += o.vec();
        return *this;
    }
    BasicTensor3& operator-=(const BasicTensor3& o) {
        require_same_shape(o);
        vec() -= o.vec();
        return *this;
    }
    BasicTensor3& operator*=(Scalar s) {
        vec() *= s;
        return *this;
    }

    friend BasicTensor3 operator+(BasicTensor3 a, const BasicTensor3& b) { return a += b; }
    friend BasicTensor3 operator-(BasicTensor3 a, const BasicTensor3& b) { return a -= b; }
    friend BasicTensor3 operator*(BasicTensor3 a, Scalar s) { return a *= s; }
    friend BasicTensor3 operator*(Scalar s, BasicTensor3 a) { return a *= s; }

    friend bool operator==(const BasicTensor3& a, const BasicTensor3& b) {
        return a.shape_ == b.shape_ && a.data_ == b.data_;
    }

    static Index count(const Shape& s) noexcept { return s[0] * s[1] * s[2]; }

private:
    static Shape checked(Shape s) {
        for (Index d : s)
            if (d <= 0) throw ArgumentError("tensor dimensions must be positive");
        return s;
    }

    void require_same_shape(const BasicTensor3& o) const {
        if (o.shape_ != shape_) throw ArgumentError("tensor shape mismatch");
    }

    Shape shape_{};
    std::vector<Scalar> data_;
};

using Tensor3 = BasicTensor3<double>;
using ComplexTensor3 = BasicTensor3<Complex>;

/// Throws ArgumentError unless mode is 1, 2 or 3.
void check_mode(int mode);

/// Shape with the extent of `mode` replaced by `extent`.
Shape with_dim(Shape shape, int mode, Index extent);

/// Mode-n unfolding: I_mode rows; the remaining two indices enumerate the
/// columns in ascending order, lower-numbered index fastest.
Matrix unfold(const Tensor3& t, int mode);
ComplexMatrix unfold(const ComplexTensor3& t, int mode);

/// Inverse of unfold for a tensor of the given shape.
Tensor3 fold(const Matrix& m, int mode, const Shape& shape);

/// n-mode product t x_mode M (M has I_mode columns).
Tensor3 mode_n_product(const Tensor3& t, const Matrix& m, int mode);

/// Cyclic rotation that makes mode k the third mode:
/// X(i,j,s) = P1(j,s,i) = P2(s,i,j) = P3(i,j,s).
Tensor3 permute_to_mode3(const Tensor3& t, int k);
ComplexTensor3 permute_to_mode3(const ComplexTensor3& t, int k);
/// Exact inverse of permute_to_mode3.
Tensor3 permute_from_mode3(const Tensor3& t, int k);
ComplexTensor3 permute_from_mode3(const ComplexTensor3& t, int k);

/// Unnormalized forward DFT of every mode-`mode` fiber.
ComplexTensor3 fft_mode(const Tensor3& t, int mode);
/// 1/n-normalized inverse DFT along `mode`, returning the real part.
/// Throws NumericalError when the imaginary residual exceeds 1e-6 of the norm.
Tensor3 ifft_mode(const ComplexTensor3& t, int mode);

double inner(const Tensor3& a, const Tensor3& b);
double fro_norm(const Tensor3& t);
double fro_norm(const ComplexTensor3& t);

bool all_finite(const Tensor3& t);

}  // namespace mctf
