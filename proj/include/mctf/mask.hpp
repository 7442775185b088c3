#pragma once

#include <cstdint>
#include <vector>

#include "mctf/tensor.hpp"

namespace mctf {

/// Index set of observed entries, stored as strictly increasing flat offsets
/// into the tensor layout.
class ObservationMask {
public:
    ObservationMask() = default;
    /// Throws ArgumentError if offsets are out of range or not strictly increasing.
    ObservationMask(Shape shape, std::vector<Index> offsets);

    static ObservationMask full(Shape shape);
    static ObservationMask none(Shape shape);

    const Shape& shape() const noexcept { return shape_; }
    const std::vector<Index>& offsets() const noexcept { return offsets_; }
    Index count() const noexcept { return static_cast<Index>(offsets_.size()); }
    bool empty() const noexcept { return offsets_.empty(); }
    /// |offsets| / (I1 I2 I3).
    double sampling_ratio() const noexcept { return sr_; }
    bool observed(Index flat) const { return flags_[static_cast<std::size_t>(flat)] != 0; }

    ObservationMask complement() const;

    friend bool operator==(const ObservationMask& a, const ObservationMask& b) {
        return a.shape_ == b.shape_ && a.offsets_ == b.offsets_;
    }

private:
    Shape shape_{};
    std::vector<Index> offsets_;
    std::vector<std::uint8_t> flags_;
    double sr_ = 0.0;
};

/// round(sr * N) distinct offsets drawn uniformly without replacement
/// (partial Fisher-Yates driven by a seeded 64-bit generator).
ObservationMask sample_uniform(const Shape& shape, double sr, std::uint64_t seed);

/// P_Omega: keeps observed entries, zeros the rest.
Tensor3 apply_mask(const Tensor3& t, const ObservationMask& mask);
/// Alias of apply_mask, named for the solver's P_Omega(F).
Tensor3 project(const Tensor3& t, const ObservationMask& mask);

}  // namespace mctf
