#pragma once

#include "sparsimg/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sparsimg {

// Binary (P5) or ASCII (P2) PGM with maxval <= 255. Values are kept as read.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);
GrayImage load_pgm_file(const std::filesystem::path& path);

// P5 with maxval 255; values are rounded to nearest and clamped to [0, 255].
std::vector<std::uint8_t> write_pgm(const GrayImage& image);
void write_pgm_file(const GrayImage& image, const std::filesystem::path& path);

// BT.601 luma, unrounded.
GrayImage rgb_to_gray(const Matrix& r, const Matrix& g, const Matrix& b);

// Deterministic synthetic sky: a smooth background of at most five broad
// cosine modes in [0, 60] plus n_stars Gaussian point sources centred on
// pixels (sigma in [0.7, 2.5], peak in [50, 195]), clamped to [0, 255].
GrayImage synth_starfield(int nx, int ny, int n_stars, std::uint64_t seed);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace sparsimg
