#pragma once

#include "sparsimg/pursuit2d.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sparsimg {

enum class Method : std::uint8_t {
    Mp2d = 1,
    Omp2d = 2,
    Spmp2d = 3,
    DctThreshold = 4,
};

std::string_view to_string(Method method);
// Accepts "mp2d", "omp2d", "spmp2d", "dct".
Method parse_method(std::string_view text);

struct BlockRect {
    int row0 = 0;
    int col0 = 0;
    int rows = 0;
    int cols = 0;

    int area() const noexcept { return rows * cols; }
    bool operator==(const BlockRect&) const = default;
};

// Row-major tiling of an Nx x Ny image by squares of side N_h; trailing
// blocks are truncated at the image boundary.
struct BlockGrid {
    int nx = 0;
    int ny = 0;
    int side = 0;
    std::vector<BlockRect> blocks;

    bool operator==(const BlockGrid&) const = default;
};

BlockGrid partition(int nx, int ny, int side);

struct BlockCode {
    std::vector<AtomPair> pairs;
    std::vector<double> coefficients;

    std::size_t size() const noexcept { return pairs.size(); }
    bool operator==(const BlockCode&) const = default;
};

// The persisted record: everything needed to rebuild the approximation.
struct BlockDecomposition {
    BlockGrid grid;
    std::vector<BlockCode> blocks;  // aligned with grid.blocks
    std::string dict_spec = "mixed";
    double target_db = 45.0;
    Method method = Method::Omp2d;

    std::size_t total_atoms() const;
    bool operator==(const BlockDecomposition&) const = default;
};

// Binary, little-endian: "SPD1", version, flags, dims, block side, method,
// dictionary spec, target PSNR, per-block records, trailing CRC-32.
inline constexpr std::uint16_t kFormatVersion = 1;

std::vector<std::uint8_t> serialize(const BlockDecomposition& dec);
// Throws FormatError carrying the byte offset of the first problem.
BlockDecomposition deserialize(std::span<const std::uint8_t> bytes);

}  // namespace sparsimg
