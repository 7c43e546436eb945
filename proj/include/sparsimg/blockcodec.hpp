#pragma once

#include "sparsimg/decomposition.hpp"
#include "sparsimg/image.hpp"
#include "sparsimg/metrics.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sparsimg {

// Global Frobenius tolerance for which PSNR equals target_db at peak 255.
double rho_for_psnr(double target_db, int nx, int ny);

struct EncodeConfig {
    std::string dict_spec = "mixed";
    Method method = Method::Omp2d;
    int block_side = 16;
    double target_db = 45.0;
    int p = 1;                   // SPMP2D projection step
    double eps_scale = 1e-9;     // SPMP2D eps = eps_scale * |I_h|_F
    int cap_factor = 10;         // MP2D/SPMP2D selection cap = cap_factor * block area
    int threads = 1;             // <= 0 selects the hardware concurrency
};

struct BlockStats {
    double tolerance = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
    std::int64_t projection_steps = 0;
};

struct EncodeResult {
    BlockDecomposition decomposition;
    std::vector<BlockStats> stats;  // aligned with the grid
    EncodeConfig config;
    double seconds = 0.0;           // pursuit time, excluding dictionary construction
};

class EncodeError : public std::runtime_error {
public:
    EncodeError(const std::string& what, BlockRect block)
        : std::runtime_error(what + " at block (" + std::to_string(block.row0) + ", " + std::to_string(block.col0) + ")"),
          block_(block) {}

    const BlockRect& block() const noexcept { return block_; }

private:
    BlockRect block_;
};

// Approximates every block to rho_h = rho * sqrt(area_h / (Nx Ny)) with the
// configured pursuit. Output is independent of the worker count. Throws
// EncodeError naming the first (in grid order) block that hit its cap.
// The "dct" dictionary routes to the thresholded-DCT path.
EncodeResult encode(const GrayImage& image, const EncodeConfig& config);

// Per-block reconstruction; values are not clipped.
GrayImage decode(const BlockDecomposition& dec);

// Separable orthonormal DCT per block with a single global magnitude
// threshold: the fewest largest coefficients whose dropped energy meets the
// target PSNR.
BlockDecomposition dct_threshold(const GrayImage& image, int block_side, double target_db);

QualityReport dct_baseline(const GrayImage& image, int block_side, double target_db);

}  // namespace sparsimg
