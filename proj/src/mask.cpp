#include "mctf/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mctf/rng.hpp"

namespace mctf {

ObservationMask::ObservationMask(Shape shape, std::vector<Index> offsets)
    : shape_(shape), offsets_(std::move(offsets)) {
    const Index n = Tensor3::count(shape_);
    if (shape_[0] <= 0 || shape_[1] <= 0 || shape_[2] <= 0) throw ArgumentError("mask dimensions must be positive");
    flags_.assign(static_cast<std::size_t>(n), 0);
    Index prev = -1;
    for (Index o : offsets_) {
        if (o < 0 || o >= n) throw ArgumentError("mask offset out of range: " + std::to_string(o));
        if (o <= prev) throw ArgumentError("mask offsets must be strictly increasing");
        flags_[static_cast<std::size_t>(o)] = 1;
        prev = o;
    }
    sr_ = static_cast<double>(offsets_.size()) / static_cast<double>(n);
}

ObservationMask ObservationMask::full(Shape shape) {
    std::vector<Index> all(static_cast<std::size_t>(Tensor3::count(shape)));
    std::iota(all.begin(), all.end(), Index{0});
    return {shape, std::move(all)};
}

ObservationMask ObservationMask::none(Shape shape) { return {shape, {}}; }

ObservationMask ObservationMask::complement() const {
    std::vector<Index> rest;
    rest.reserve(flags_.size() - offsets_.size());
    for (std::size_t i = 0; i < flags_.size(); ++i)
        if (!flags_[i]) rest.push_back(static_cast<Index>(i));
    return {shape_, std::move(rest)};
}

ObservationMask sample_uniform(const Shape& shape, double sr, std::uint64_t seed) {
    if (!(sr >= 0.0 && sr <= 1.0)) throw ArgumentError("sampling ratio must lie in [0, 1]");
    const Index n = Tensor3::count(shape);
    const auto take = static_cast<Index>(std::llround(sr * static_cast<double>(n)));
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    Rng rng(seed);
    for (Index i = 0; i < take; ++i) {
        const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(take));
    std::sort(pool.begin(), pool.end());
    return {shape, std::move(pool)};
}

Tensor3 apply_mask(const Tensor3& t, const ObservationMask& mask) {
    if (t.shape() != mask.shape()) throw ArgumentError("apply_mask: shape mismatch");
    Tensor3 out(t.shape());
    for (Index o : mask.offsets()) out[o] = t[o];
    return out;
}

Tensor3 project(const Tensor3& t, const ObservationMask& mask) { return apply_mask(t, mask); }

}  // namespace mctf
