#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mctf/factors.hpp"
#include "mctf/mask.hpp"

namespace mctf {

/// Per-mode ranks r_n = max(1, round(fraction * min(I_n, prod_{j != n} I_j))),
/// i.e. the given fraction of the largest possible number of singular values.
Ranks rank_heuristic(const Shape& shape, double fraction = 0.005);
inline Ranks rank_heuristic(const Tensor3& t, double fraction = 0.005) { return rank_heuristic(t.shape(), fraction); }

struct SyntheticData {
    Tensor3 tensor;
    MctfFactors factors;
};

/// How synth_mctf draws the cores.
///
/// shared:      standard-normal X_1, X_2, X_3 and one r1 x r2 x r3 core C,
///              G_n = C x_{j != n} X_j. Every term G_n x_n X_n is the same
///              Tucker tensor, so the result has multilinear rank (r1, r2, r3).
/// independent: standard-normal X_n and G_n drawn per mode (X_1, G_1, X_2, ...).
///              The sum is generally full rank in every unfolding.
enum class CoreStructure { shared, independent };

std::string to_string(CoreStructure c);
CoreStructure parse_core_structure(const std::string& s);

/// Returns compose(factors) plus optional i.i.d. N(0, noise_sigma^2) noise,
/// with the factors for oracle comparison.
SyntheticData synth_mctf(const Shape& shape, const Ranks& ranks, std::uint64_t seed, double noise_sigma = 0.0,
                         CoreStructure structure = CoreStructure::shared,
                         const ModeWeights& alpha = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});

// TNS1 container, all integers little-endian:
//   0  "TNS1"        4 bytes magic
//   4  version       u8 (= 1)
//   5  element type  u8 (1 = f64 tensor values, 2 = u64 mask offsets)
//   6  reserved      2 bytes, zero
//   8  ndim          u32 (= 3)
//   12 I1, I2, I3    3 x u32
//   24 payload       f64 values in tensor layout, or sorted u64 offsets
inline constexpr std::size_t kTnsHeaderSize = 24;
inline constexpr std::uint8_t kTnsVersion = 1;
inline constexpr std::uint8_t kTnsElementF64 = 1;
inline constexpr std::uint8_t kTnsElementU64 = 2;

std::vector<std::uint8_t> encode_tensor(const Tensor3& t);
Tensor3 decode_tensor(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_mask(const ObservationMask& m);
ObservationMask decode_mask(const std::vector<std::uint8_t>& bytes);

void save_tensor(const Tensor3& t, const std::filesystem::path& path);
Tensor3 load_tensor(const std::filesystem::path& path);
void save_mask(const ObservationMask& m, const std::filesystem::path& path);
ObservationMask load_mask(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace mctf
