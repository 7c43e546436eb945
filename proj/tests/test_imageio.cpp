#include "sparsimg/blockcodec.hpp"
#include "sparsimg/imageio.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace sparsimg;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("load pgm") {
    auto p5 = bytes_of("P5 2 2 255\n");
    for (std::uint8_t v : {0, 255, 128, 64}) {
        p5.push_back(v);
    }
    const GrayImage a = load_pgm(p5);
    REQUIRE(a.rows() == 2);
    REQUIRE(a.cols() == 2);
    CHECK(a(0, 0) == 0.0);
    CHECK(a(0, 1) == 255.0);
    CHECK(a(1, 0) == 128.0);
    CHECK(a(1, 1) == 64.0);

    const GrayImage b = load_pgm(bytes_of("P2\n# comment\n2 2\n255\n0 255\n128   64\n"));
    CHECK(a == b);

    const GrayImage c = load_pgm(bytes_of("P2 3 1 # trailing\n 9 1 2 3"));
    CHECK(c.rows() == 1);
    CHECK(c.cols() == 3);
    CHECK(c(0, 2) == 3.0);
}

TEST_CASE("load pgm errors") {
    CHECK_THROWS_AS(load_pgm(bytes_of("P6 1 1 255\n\x01\x02\x03")), FormatError);
    CHECK_THROWS_AS(load_pgm(bytes_of("P5 1 1 65535\n\x01\x02")), FormatError);
    CHECK_THROWS_AS(load_pgm(bytes_of("P5 2 2 255\n\x01\x02")), FormatError);
    CHECK_THROWS_AS(load_pgm(bytes_of("P2 2 2 255\n1 2 3")), FormatError);
    CHECK_THROWS_AS(load_pgm(bytes_of("P2 1 1 10\n11")), FormatError);
    CHECK_THROWS_AS(load_pgm(bytes_of("P5 0 1 255\n")), FormatError);
    CHECK_THROWS_AS(load_pgm(bytes_of("P5 x")), FormatError);
    try {
        load_pgm(bytes_of("Q5"));
    } catch (const FormatError& e) {
        CHECK(e.offset() == 0);
    }
}

TEST_CASE("pgm round trip") {
    const GrayImage sky = synth_starfield(17, 23, 5, 8);
    const GrayImage rounded(sky.pixels().array().round());
    const auto bytes = write_pgm(rounded);
    CHECK(load_pgm(bytes) == rounded);
    CHECK(write_pgm(load_pgm(bytes)) == bytes);

    const GrayImage wild(Matrix::Constant(2, 2, 300.0));
    CHECK(load_pgm(write_pgm(wild))(0, 0) == 255.0);

    const auto path = std::filesystem::temp_directory_path() / "sparsimg_roundtrip.pgm";
    write_pgm_file(rounded, path);
    CHECK(load_pgm_file(path) == rounded);
    std::filesystem::remove(path);
    CHECK_THROWS(load_pgm_file(path));
}

TEST_CASE("rgb to gray") {
    const Matrix full = Matrix::Constant(1, 1, 255.0);
    const Matrix zero = Matrix::Zero(1, 1);
    CHECK(rgb_to_gray(full, full, full)(0, 0) == doctest::Approx(255.0));
    CHECK(rgb_to_gray(full, zero, zero)(0, 0) == doctest::Approx(76.245));
    CHECK(rgb_to_gray(zero, zero, zero)(0, 0) == 0.0);
    CHECK_THROWS_AS(rgb_to_gray(full, Matrix::Zero(1, 2), full), std::invalid_argument);
}

TEST_CASE("synthetic star-field") {
    const GrayImage a = synth_starfield(256, 256, 50, 7);
    CHECK(a == synth_starfield(256, 256, 50, 7));
    CHECK_FALSE(a == synth_starfield(256, 256, 50, 8));
    CHECK(a.pixels().maxCoeff() >= 50.0);
    CHECK(a.pixels().minCoeff() >= 0.0);
    CHECK(a.pixels().maxCoeff() <= 255.0);

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GrayImage smooth = synth_starfield(64, 64, 0, seed);
        CHECK(smooth.pixels().minCoeff() >= 0.0);
        CHECK(smooth.pixels().maxCoeff() <= 60.0);
        const QualityReport q = dct_baseline(smooth, 16, 45.0);
        CHECK(static_cast<double>(q.total_atoms) < 0.03 * 64 * 64);
    }
    CHECK_THROWS_AS(synth_starfield(0, 4, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(synth_starfield(4, 4, -1, 1), std::invalid_argument);
}
