#include "sparsimg/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace sparsimg {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

Vector gaussian_window() {
    Vector w(kWindow);
    const int half = kWindow / 2;
    for (int i = 0; i < kWindow; ++i) {
        const double x = i - half;
        w(i) = std::exp(-(x * x) / (2.0 * kSigma * kSigma));
    }
    return w / w.sum();
}

// Separable "valid" filtering with the normalized Gaussian.
Matrix filter_valid(const Matrix& m, const Vector& w) {
    const Eigen::Index rows = m.rows() - kWindow + 1;
    const Eigen::Index cols = m.cols() - kWindow + 1;
    Matrix tmp(rows, m.cols());
    for (Eigen::Index i = 0; i < rows; ++i) {
        tmp.row(i) = w.transpose() * m.middleRows(i, kWindow);
    }
    Matrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        out.col(j) = tmp.middleCols(j, kWindow) * w;
    }
    return out;
}

std::string format_number(const char* fmt, double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "NA";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

double psnr(const GrayImage& a, const GrayImage& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("psnr: dimension mismatch");
    }
    if (a.empty()) {
        throw std::invalid_argument("psnr: empty image");
    }
    const double sq = (a.pixels() - b.pixels()).squaredNorm();
    if (sq == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double mse = sq / static_cast<double>(a.pixels().size());
    return 10.0 * std::log10(kPeak * kPeak / mse);
}

double mssim(const GrayImage& a, const GrayImage& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("mssim: dimension mismatch");
    }
    if (a.rows() < kWindow || a.cols() < kWindow) {
        throw std::invalid_argument("mssim: image smaller than the 11x11 window");
    }
    const double c1 = (0.01 * kPeak) * (0.01 * kPeak);
    const double c2 = (0.03 * kPeak) * (0.03 * kPeak);
    const Vector w = gaussian_window();
    const Matrix& x = a.pixels();
    const Matrix& y = b.pixels();

    const Matrix mu_x = filter_valid(x, w);
    const Matrix mu_y = filter_valid(y, w);
    const Matrix xx = filter_valid(x.cwiseProduct(x), w);
    const Matrix yy = filter_valid(y.cwiseProduct(y), w);
    const Matrix xy = filter_valid(x.cwiseProduct(y), w);

    double total = 0.0;
    for (Eigen::Index j = 0; j < mu_x.cols(); ++j) {
        for (Eigen::Index i = 0; i < mu_x.rows(); ++i) {
            const double mx = mu_x(i, j);
            const double my = mu_y(i, j);
            const double vx = xx(i, j) - mx * mx;
            const double vy = yy(i, j) - my * my;
            const double cov = xy(i, j) - mx * my;
            total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
        }
    }
    return total / static_cast<double>(mu_x.size());
}

double sparsity_ratio(const BlockDecomposition& dec) {
    std::size_t pixels = 0;
    for (const BlockRect& rect : dec.grid.blocks) {
        pixels += static_cast<std::size_t>(rect.area());
    }
    const std::size_t atoms = dec.total_atoms();
    if (atoms == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(pixels) / static_cast<double>(atoms);
}

std::string QualityReport::csv_header() {
    return "image,dict,method,block,psnr_db,sr,mssim,atoms,seconds";
}

std::string QualityReport::csv_row() const {
    return image + "," + dict + "," + method + "," + std::to_string(block) + "," + format_number("%.4f", psnr_db) + ","
           + format_number("%.4f", sr) + "," + format_number("%.6f", mssim) + "," + std::to_string(total_atoms) + ","
           + format_number("%.3f", wall_time_s);
}

std::string QualityReport::to_text() const {
    return "image:   " + image + "\n" + "dict:    " + dict + "\n" + "method:  " + method + "\n"
           + "block:   " + std::to_string(block) + "\n" + "PSNR:    " + format_number("%.4f", psnr_db) + " dB\n"
           + "SR:      " + format_number("%.4f", sr) + "\n" + "MSSIM:   " + format_number("%.6f", mssim) + "\n"
           + "atoms:   " + std::to_string(total_atoms) + "\n" + "seconds: " + format_number("%.3f", wall_time_s)
           + "\n";
}

}  // namespace sparsimg
