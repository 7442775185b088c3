#include "mctf/data_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

#include "mctf/rng.hpp"

namespace mctf {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(b)]) << (8 * b);
    return v;
}

std::uint64_t get_u64(const std::vector<std::uint8_t>& in, std::size_t at) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[at + static_cast<std::size_t>(b)]) << (8 * b);
    return v;
}

std::vector<std::uint8_t> encode_header(const Shape& shape, std::uint8_t element) {
    std::vector<std::uint8_t> out{'T', 'N', 'S', '1', kTnsVersion, element, 0, 0};
    put_u32(out, 3);
    for (Index d : shape) {
        if (d > static_cast<Index>(std::numeric_limits<std::uint32_t>::max()))
            throw ArgumentError("tensor dimension too large for TNS1");
        put_u32(out, static_cast<std::uint32_t>(d));
    }
    return out;
}

// Validates the fixed header and returns the shape.
Shape decode_header(const std::vector<std::uint8_t>& in, std::uint8_t element) {
    if (in.size() < kTnsHeaderSize) throw FormatError("truncated TNS1 header", in.size());
    if (in[0] != 'T' || in[1] != 'N' || in[2] != 'S' || in[3] != '1') throw FormatError("bad magic, expected TNS1", 0);
    if (in[4] != kTnsVersion) throw FormatError("unsupported TNS1 version " + std::to_string(in[4]), 4);
    if (in[5] != element) throw FormatError("unexpected element type " + std::to_string(in[5]), 5);
    if (get_u32(in, 8) != 3) throw FormatError("only 3-way tensors are supported", 8);
    Shape shape{};
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::uint32_t d = get_u32(in, 12 + 4 * k);
        if (d == 0) throw FormatError("zero dimension", 12 + 4 * k);
        total *= d;
        // payload must be addressable: total * 8 bytes within 2^62
        if (total > (std::uint64_t{1} << 59)) throw FormatError("dimension product overflows", 12 + 4 * k);
        shape[k] = static_cast<Index>(d);
    }
    return shape;
}

}  // namespace

Ranks rank_heuristic(const Shape& shape, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ArgumentError("rank fraction must lie in (0, 1]");
    const Index total = Tensor3::count(shape);
    Ranks r{};
    for (std::size_t k = 0; k < 3; ++k) {
        const Index max_rank = std::min(shape[k], total / shape[k]);
        r[k] = std::max<Index>(1, static_cast<Index>(std::llround(fraction * static_cast<double>(max_rank))));
    }
    return r;
}

std::string to_string(CoreStructure c) { return c == CoreStructure::shared ? "shared" : "independent"; }

CoreStructure parse_core_structure(const std::string& s) {
    if (s == "shared") return CoreStructure::shared;
    if (s == "independent") return CoreStructure::independent;
    throw ArgumentError("unknown core structure '" + s + "' (expected shared or independent)");
}

SyntheticData synth_mctf(const Shape& shape, const Ranks& ranks, std::uint64_t seed, double noise_sigma,
                         CoreStructure structure, const ModeWeights& alpha) {
    for (std::size_t k = 0; k < 3; ++k) {
        if (shape[k] <= 0) throw ArgumentError("shape must be positive");
        if (ranks[k] <= 0 || ranks[k] > shape[k])
            throw ArgumentError("rank r" + std::to_string(k + 1) + " must lie in [1, I" + std::to_string(k + 1) + "]");
    }
    if (!(noise_sigma >= 0.0)) throw ArgumentError("noise sigma must be non-negative");
    Rng rng(seed);
    auto gaussian_matrix = [&](Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index c = 0; c < cols; ++c)
            for (Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
        return m;
    };
    auto gaussian_tensor = [&](const Shape& s) {
        Tensor3 t(s);
        for (double& v : t.data()) v = rng.normal();
        return t;
    };

    SyntheticData out;
    auto& f = out.factors;
    f.alpha = alpha;
    if (structure == CoreStructure::independent) {
        for (int n = 1; n <= 3; ++n) {
            const auto k = static_cast<std::size_t>(n - 1);
            f.X[k] = gaussian_matrix(shape[k], ranks[k]);
            f.G[k] = gaussian_tensor(with_dim(shape, n, ranks[k]));
        }
    } else {
        for (std::size_t k = 0; k < 3; ++k) f.X[k] = gaussian_matrix(shape[k], ranks[k]);
        const Tensor3 core = gaussian_tensor(ranks);
        f.G[0] = mode_n_product(mode_n_product(core, f.X[1], 2), f.X[2], 3);
        f.G[1] = mode_n_product(mode_n_product(core, f.X[0], 1), f.X[2], 3);
        f.G[2] = mode_n_product(mode_n_product(core, f.X[0], 1), f.X[1], 2);
    }
    out.tensor = compose(f);
    if (noise_sigma > 0.0)
        for (double& v : out.tensor.data()) v += noise_sigma * rng.normal();
    return out;
}

std::vector<std::uint8_t> encode_tensor(const Tensor3& t) {
    std::vector<std::uint8_t> out = encode_header(t.shape(), kTnsElementF64);
    out.reserve(kTnsHeaderSize + 8 * static_cast<std::size_t>(t.size()));
    for (double v : t.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

Tensor3 decode_tensor(const std::vector<std::uint8_t>& in) {
    const Shape shape = decode_header(in, kTnsElementF64);
    const auto n = static_cast<std::uint64_t>(Tensor3::count(shape));
    const std::uint64_t expected = kTnsHeaderSize + 8 * n;
    if (in.size() < expected) throw FormatError("truncated TNS1 payload", in.size());
    if (in.size() > expected) throw FormatError("trailing bytes after TNS1 payload", expected);
    std::vector<double> data(n);
    for (std::uint64_t i = 0; i < n; ++i) data[i] = std::bit_cast<double>(get_u64(in, kTnsHeaderSize + 8 * i));
    return {shape, std::move(data)};
}

std::vector<std::uint8_t> encode_mask(const ObservationMask& m) {
    std::vector<std::uint8_t> out = encode_header(m.shape(), kTnsElementU64);
    for (Index o : m.offsets()) put_u64(out, static_cast<std::uint64_t>(o));
    return out;
}

ObservationMask decode_mask(const std::vector<std::uint8_t>& in) {
    const Shape shape = decode_header(in, kTnsElementU64);
    const std::size_t payload = in.size() - kTnsHeaderSize;
    if (payload % 8 != 0) throw FormatError("mask payload is not a whole number of u64 offsets", in.size());
    const auto n = static_cast<std::uint64_t>(Tensor3::count(shape));
    std::vector<Index> offsets(payload / 8);
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const std::size_t at = kTnsHeaderSize + 8 * i;
        const std::uint64_t o = get_u64(in, at);
        if (o >= n) throw FormatError("mask offset out of range", at);
        if (i > 0 && o <= prev) throw FormatError("mask offsets not strictly increasing", at);
        offsets[i] = static_cast<Index>(o);
        prev = o;
    }
    return {shape, std::move(offsets)};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ArgumentError("write failed for " + path.string());
}

void save_tensor(const Tensor3& t, const std::filesystem::path& path) { write_file(path, encode_tensor(t)); }
Tensor3 load_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }
void save_mask(const ObservationMask& m, const std::filesystem::path& path) { write_file(path, encode_mask(m)); }
ObservationMask load_mask(const std::filesystem::path& path) { return decode_mask(read_file(path)); }

}  // namespace mctf
