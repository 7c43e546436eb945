#include "sparsimg/imageio.hpp"

#include "sparsimg/random.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sparsimg {

namespace {

class PgmScanner {
public:
    explicit PgmScanner(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then reads an unsigned decimal.
    unsigned long number(const char* what) {
        skip_separators();
        const std::size_t start = pos_;
        unsigned long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFul) {
                throw FormatError(std::string("PGM: ") + what + " too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw FormatError(std::string("PGM: expected ") + what, start);
        }
        return value;
    }

    // The single whitespace byte separating the header from a P5 raster.
    void raster_separator() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw FormatError("PGM: missing whitespace before raster", pos_);
        }
        ++pos_;
    }

    std::size_t pos() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
    std::uint8_t take() { return bytes_[pos_++]; }

private:
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
        throw FormatError("PGM: bad magic (expected P5 or P2)", 0);
    }
    const bool binary = bytes[1] == '5';
    PgmScanner scan(bytes.subspan(2));
    const auto width = scan.number("width");
    const auto height = scan.number("height");
    const std::size_t maxval_offset = scan.pos() + 2;
    const auto maxval = scan.number("maxval");
    if (width == 0 || height == 0) {
        throw FormatError("PGM: zero dimension", 2);
    }
    if (maxval == 0 || maxval > 255) {
        throw FormatError("PGM: maxval must be in 1..255, got " + std::to_string(maxval), maxval_offset);
    }
    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (binary) {
        scan.raster_separator();
        if (scan.remaining() < count) {
            throw FormatError("PGM: truncated raster", scan.pos() + 2 + scan.remaining());
        }
    }
    Matrix pixels(static_cast<Eigen::Index>(height), static_cast<Eigen::Index>(width));
    for (Eigen::Index i = 0; i < pixels.rows(); ++i) {
        for (Eigen::Index j = 0; j < pixels.cols(); ++j) {
            const std::size_t at = scan.pos() + 2;
            unsigned long v;
            if (binary) {
                v = scan.take();
            } else {
                if (scan.remaining() == 0) {
                    throw FormatError("PGM: truncated raster", at);
                }
                v = scan.number("sample");
            }
            if (v > maxval) {
                throw FormatError("PGM: sample exceeds maxval", at);
            }
            pixels(i, j) = static_cast<double>(v);
        }
    }
    return GrayImage(std::move(pixels));
}

GrayImage load_pgm_file(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return load_pgm(bytes);
}

std::vector<std::uint8_t> write_pgm(const GrayImage& image) {
    const std::string header =
        "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + static_cast<std::size_t>(image.pixels().size()));
    for (Eigen::Index i = 0; i < image.rows(); ++i) {
        for (Eigen::Index j = 0; j < image.cols(); ++j) {
            const double v = std::clamp(std::round(image(i, j)), 0.0, 255.0);
            out.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return out;
}

void write_pgm_file(const GrayImage& image, const std::filesystem::path& path) {
    write_file(path, write_pgm(image));
}

GrayImage rgb_to_gray(const Matrix& r, const Matrix& g, const Matrix& b) {
    if (r.rows() != g.rows() || r.rows() != b.rows() || r.cols() != g.cols() || r.cols() != b.cols()) {
        throw std::invalid_argument("rgb_to_gray: plane dimensions differ");
    }
    return GrayImage(0.299 * r + 0.587 * g + 0.114 * b);
}

GrayImage synth_starfield(int nx, int ny, int n_stars, std::uint64_t seed) {
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("synth_starfield: dimensions must be positive");
    }
    if (n_stars < 0) {
        throw std::invalid_argument("synth_starfield: n_stars must be >= 0");
    }
    Rng rng(seed);
    Matrix sky(nx, ny);

    // Background: base level plus at most five low-frequency modes whose
    // amplitudes sum to no more than the base, so it stays within [0, 60].
    const int modes = 1 + static_cast<int>(rng.below(5));
    const double base = rng.uniform(25.0, 30.0);
    struct Mode {
        double amplitude, fx, fy, phase;
    };
    std::vector<Mode> waves;
    double budget = base;
    for (int k = 0; k < modes; ++k) {
        const double amplitude = rng.uniform(0.3, 1.0) * budget / (modes - k);
        budget -= amplitude;
        waves.push_back({amplitude, static_cast<double>(rng.below(3)), static_cast<double>(rng.below(3)),
                         rng.uniform(0.0, 2.0 * std::numbers::pi)});
    }
    for (Eigen::Index j = 0; j < ny; ++j) {
        for (Eigen::Index i = 0; i < nx; ++i) {
            double v = base;
            for (const Mode& w : waves) {
                v += w.amplitude * std::cos(2.0 * std::numbers::pi * (w.fx * i / nx + w.fy * j / ny) + w.phase);
            }
            sky(i, j) = v;
        }
    }

    for (int s = 0; s < n_stars; ++s) {
        const auto ci = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(nx)));
        const auto cj = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(ny)));
        const double sigma = rng.uniform(0.7, 2.5);
        const double peak = rng.uniform(50.0, 195.0);
        const auto reach = static_cast<Eigen::Index>(std::ceil(4.0 * sigma));
        for (Eigen::Index i = std::max<Eigen::Index>(0, ci - reach); i <= std::min<Eigen::Index>(nx - 1, ci + reach); ++i) {
            for (Eigen::Index j = std::max<Eigen::Index>(0, cj - reach); j <= std::min<Eigen::Index>(ny - 1, cj + reach); ++j) {
                const double d2 = static_cast<double>((i - ci) * (i - ci) + (j - cj) * (j - cj));
                sky(i, j) += peak * std::exp(-d2 / (2.0 * sigma * sigma));
            }
        }
    }
    return GrayImage(sky.cwiseMax(0.0).cwiseMin(255.0));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

}  // namespace sparsimg
