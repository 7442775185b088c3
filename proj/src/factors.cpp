#include "mctf/factors.hpp"

namespace mctf {

Shape MctfFactors::target_shape() const {
    Shape shape{};
    for (int n = 1; n <= 3; ++n) {
        const auto& x = X[static_cast<std::size_t>(n - 1)];
        const auto& g = G[static_cast<std::size_t>(n - 1)];
        if (g.empty() || x.cols() != g.dim(n))
            throw ArgumentError("factor " + std::to_string(n) + ": X_n columns must equal the mode-n extent of G_n");
        Shape s = with_dim(g.shape(), n, x.rows());
        if (n > 1 && s != shape) throw ArgumentError("factors compose to different shapes");
        shape = s;
    }
    return shape;
}

Tensor3 compose(const MctfFactors& f) {
    Tensor3 out(f.target_shape());
    for (int n = 1; n <= 3; ++n) {
        const auto k = static_cast<std::size_t>(n - 1);
        out += f.alpha[k] * mode_n_product(f.G[k], f.X[k], n);
    }
    return out;
}

Tensor3 compose_permuted(const MctfFactors& f) {
    Tensor3 out(f.target_shape());
    for (int n = 1; n <= 3; ++n) {
        const auto k = static_cast<std::size_t>(n - 1);
        Tensor3 term = permute_from_mode3(mode_n_product(permute_to_mode3(f.G[k], n), f.X[k], 3), n);
        out += f.alpha[k] * term;
    }
    return out;
}

}  // namespace mctf
