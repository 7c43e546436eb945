#pragma once

#include "sparsimg/decomposition.hpp"
#include "sparsimg/image.hpp"

#include <string>

namespace sparsimg {

inline constexpr double kPeak = 255.0;

// 10 log10(255^2 / MSE); +inf when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b);

// Mean SSIM over the valid region of an 11x11 Gaussian window (sigma 1.5),
// C1 = (0.01*255)^2, C2 = (0.03*255)^2. Both images must be at least 11x11.
double mssim(const GrayImage& a, const GrayImage& b);

// Pixel count over coefficient count; +inf when there are no coefficients.
double sparsity_ratio(const BlockDecomposition& dec);

struct QualityReport {
    std::string image;
    std::string dict;
    std::string method;
    int block = 0;
    double psnr_db = 0.0;
    double sr = 0.0;
    double mssim = 0.0;
    std::size_t total_atoms = 0;
    double wall_time_s = 0.0;

    static std::string csv_header();
    std::string csv_row() const;
    std::string to_text() const;
};

}  // namespace sparsimg
