#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sparsimg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Raised for malformed external input (PGM rasters, decomposition files).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what, std::size_t offset = 0)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Grayscale intensity image. rows() == Nx (image height), cols() == Ny (width).
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(Eigen::Index nx, Eigen::Index ny) : pixels_(Matrix::Zero(nx, ny)) {}
    explicit GrayImage(Matrix pixels);

    Eigen::Index rows() const noexcept { return pixels_.rows(); }
    Eigen::Index cols() const noexcept { return pixels_.cols(); }
    bool empty() const noexcept { return pixels_.size() == 0; }

    double operator()(Eigen::Index i, Eigen::Index j) const { return pixels_(i, j); }
    double& operator()(Eigen::Index i, Eigen::Index j) { return pixels_(i, j); }

    const Matrix& pixels() const noexcept { return pixels_; }
    Matrix& pixels() noexcept { return pixels_; }

    // Copy with every value clamped to [0, 255].
    GrayImage clamped() const;

    bool operator==(const GrayImage& other) const {
        return pixels_.rows() == other.pixels_.rows() && pixels_.cols() == other.pixels_.cols()
               && pixels_ == other.pixels_;
    }

private:
    Matrix pixels_;
};

inline GrayImage::GrayImage(Matrix pixels) : pixels_(std::move(pixels)) {
    if (!pixels_.allFinite()) {
        throw std::invalid_argument("GrayImage: non-finite pixel value");
    }
}

inline GrayImage GrayImage::clamped() const {
    return GrayImage(pixels_.cwiseMax(0.0).cwiseMin(255.0));
}

}  // namespace sparsimg
