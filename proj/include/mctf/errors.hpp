#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mctf {

/// Bad caller input: wrong mode, mismatched shapes, out-of-range parameters.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical post-condition failed (e.g. an inverse FFT that should be real is not).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The solver produced a non-finite value; `block()` names the update that did it.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string block, int iteration)
        : std::runtime_error("non-finite value in " + block + " at iteration " +
                             std::to_string(iteration)),
          block_(std::move(block)) {}

    const std::string& block() const noexcept { return block_; }

private:
    std::string block_;
};

/// Malformed TNS1 / mask file. `offset()` is the byte position where parsing failed.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

}  // namespace mctf
