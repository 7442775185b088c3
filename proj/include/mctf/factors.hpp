#pragma once

#include <array>

#include "mctf/tensor.hpp"

namespace mctf {

using Ranks = std::array<Index, 3>;
using ModeWeights = std::array<double, 3>;

/// Multi-modal core tensor factorization: Y = sum_n alpha_n (G_n x_n X_n),
/// with X_n of size I_n x r_n and G_n of the target shape with I_n replaced
/// by r_n. Factors are not required to be orthogonal.
struct MctfFactors {
    std::array<Matrix, 3> X;
    std::array<Tensor3, 3> G;
    ModeWeights alpha{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

    /// Shape of the composed tensor. Throws ArgumentError when the factors disagree.
    Shape target_shape() const;
};

/// sum_n alpha_n * mode_n_product(G_n, X_n, n).
Tensor3 compose(const MctfFactors& f);

/// Same tensor through the permuted form: every term is computed as a
/// mode-3 product on permute_to_mode3(G_n, n) and rotated back.
Tensor3 compose_permuted(const MctfFactors& f);

}  // namespace mctf
