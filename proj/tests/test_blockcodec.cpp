#include "sparsimg/blockcodec.hpp"
#include "sparsimg/imageio.hpp"
#include "sparsimg/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sparsimg;

namespace {

BlockDecomposition random_decomposition(Rng& rng) {
    BlockDecomposition dec;
    const int nx = 1 + static_cast<int>(rng.below(40));
    const int ny = 1 + static_cast<int>(rng.below(40));
    dec.grid = partition(nx, ny, 1 + static_cast<int>(rng.below(20)));
    dec.dict_spec = rng.below(2) == 0 ? "mixed" : "rr:" + std::to_string(rng.below(1000));
    dec.target_db = rng.uniform(20.0, 60.0);
    dec.method = static_cast<Method>(1 + rng.below(4));
    for (const BlockRect& rect : dec.grid.blocks) {
        BlockCode code;
        const auto k = rng.below(static_cast<std::uint64_t>(rect.area()) + 1);
        for (std::uint64_t i = 0; i < k; ++i) {
            code.pairs.push_back({static_cast<std::uint32_t>(rng.below(100)), static_cast<std::uint32_t>(rng.below(100))});
            code.coefficients.push_back(rng.normal() * 100.0);
        }
        dec.blocks.push_back(std::move(code));
    }
    return dec;
}

}  // namespace

TEST_CASE("methods") {
    for (Method m : {Method::Mp2d, Method::Omp2d, Method::Spmp2d, Method::DctThreshold}) {
        CHECK(parse_method(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_method("lasso"), std::invalid_argument);
}

TEST_CASE("partition") {
    const BlockGrid a = partition(32, 32, 16);
    CHECK(a.blocks.size() == 4);
    for (const BlockRect& r : a.blocks) {
        CHECK(r.rows == 16);
        CHECK(r.cols == 16);
    }
    const BlockGrid b = partition(40, 32, 16);
    REQUIRE(b.blocks.size() == 6);
    CHECK(b.blocks[4] == BlockRect{32, 0, 8, 16});
    CHECK(b.blocks[5] == BlockRect{32, 16, 8, 16});
    const BlockGrid c = partition(8, 8, 16);
    REQUIRE(c.blocks.size() == 1);
    CHECK(c.blocks[0] == BlockRect{0, 0, 8, 8});
    CHECK_THROWS_AS(partition(8, 8, 0), std::invalid_argument);

    // Exact tiling.
    const BlockGrid g = partition(37, 23, 7);
    Eigen::MatrixXi cover = Eigen::MatrixXi::Zero(37, 23);
    for (const BlockRect& r : g.blocks) {
        cover.block(r.row0, r.col0, r.rows, r.cols).array() += 1;
    }
    CHECK((cover.array() == 1).all());
}

TEST_CASE("rho for psnr") {
    CHECK(rho_for_psnr(45.0, 1, 1) == doctest::Approx(255.0 * std::pow(10.0, -2.25)));
    CHECK(rho_for_psnr(45.0, 1, 1) == doctest::Approx(1.4336).epsilon(1e-3));
    const double db = 20.0 * std::log10(255.0);
    CHECK(rho_for_psnr(db, 30, 20) / std::sqrt(600.0) == doctest::Approx(1.0));
    CHECK(rho_for_psnr(60.0, 8, 8) < rho_for_psnr(50.0, 8, 8));
}

TEST_CASE("constant and zero images") {
    EncodeConfig cfg;
    cfg.block_side = 8;
    const GrayImage constant(Matrix::Constant(24, 16, 128.0));
    const EncodeResult r = encode(constant, cfg);
    for (const BlockCode& b : r.decomposition.blocks) {
        REQUIRE(b.size() == 1);
        CHECK(b.pairs[0] == AtomPair{0, 0});
    }
    CHECK(sparsity_ratio(r.decomposition) == doctest::Approx(64.0));
    CHECK(psnr(constant, decode(r.decomposition)) >= 45.0);

    const GrayImage zero(24, 16);
    const EncodeResult z = encode(zero, cfg);
    CHECK(z.decomposition.total_atoms() == 0);
    CHECK(std::isinf(psnr(zero, decode(z.decomposition))));
}

TEST_CASE("encode meets the psnr target for every method") {
    const GrayImage sky = synth_starfield(40, 36, 12, 99);
    for (Method m : {Method::Mp2d, Method::Omp2d, Method::Spmp2d}) {
        EncodeConfig cfg;
        cfg.method = m;
        cfg.block_side = 16;
        const EncodeResult r = encode(sky, cfg);
        CAPTURE(to_string(m));
        const GrayImage approx = decode(r.decomposition);
        CHECK(psnr(sky, approx) >= 45.0);
        CHECK(r.decomposition.blocks.size() == r.decomposition.grid.blocks.size());
        CHECK(r.stats.size() == r.decomposition.grid.blocks.size());
        double budget = 0.0;
        for (const BlockStats& s : r.stats) {
            CHECK(s.residual_norm <= s.tolerance);
            budget += s.tolerance * s.tolerance;
        }
        CHECK(std::sqrt(budget) == doctest::Approx(rho_for_psnr(45.0, 40, 36)));
        CHECK(decode(r.decomposition) == approx);
    }
}

TEST_CASE("encode is independent of the worker count") {
    const GrayImage sky = synth_starfield(48, 48, 20, 5);
    EncodeConfig one;
    one.threads = 1;
    EncodeConfig many = one;
    many.threads = 4;
    CHECK(serialize(encode(sky, one).decomposition) == serialize(encode(sky, many).decomposition));
}

TEST_CASE("encode reports the failing block") {
    Rng rng(1);
    Matrix noise(32, 32);
    for (Eigen::Index i = 0; i < noise.size(); ++i) {
        noise(i) = rng.uniform(0.0, 255.0);
    }
    EncodeConfig cfg;
    cfg.method = Method::Mp2d;
    cfg.cap_factor = 1;
    cfg.target_db = 120.0;
    try {
        encode(GrayImage(noise), cfg);
        FAIL("expected EncodeError");
    } catch (const EncodeError& e) {
        CHECK(e.block() == BlockRect{0, 0, 16, 16});
        CHECK(std::string(e.what()).find("(0, 0)") != std::string::npos);
    }
}

TEST_CASE("other dictionaries") {
    const GrayImage sky = synth_starfield(24, 24, 6, 3);
    for (const char* spec : {"rdc", "rdw", "rr:7"}) {
        EncodeConfig cfg;
        cfg.dict_spec = spec;
        const EncodeResult r = encode(sky, cfg);
        CHECK(r.decomposition.dict_spec == spec);
        CHECK(psnr(sky, decode(r.decomposition)) >= 45.0);
    }
    EncodeConfig bad;
    bad.dict_spec = "nope";
    CHECK_THROWS_AS(encode(sky, bad), std::invalid_argument);
}

TEST_CASE("dct baseline") {
    const GrayImage constant(Matrix::Constant(32, 32, 77.0));
    const BlockDecomposition c = dct_threshold(constant, 16, 45.0);
    for (const BlockCode& b : c.blocks) {
        CHECK(b.size() == 1);
    }

    // One DC basis element per block reproduces the image exactly.
    const Dictionary1D dc = build_rdc(16, 16);
    Matrix tile = 200.0 * dc.atom(3) * dc.atom(5).transpose();
    Matrix image(32, 32);
    image << tile, tile, tile, tile;
    const QualityReport r = dct_baseline(GrayImage(image), 16, 45.0);
    CHECK(r.total_atoms == 4);
    CHECK(r.psnr_db > 200.0);

    const GrayImage sky = synth_starfield(64, 64, 25, 12);
    const QualityReport q = dct_baseline(sky, 16, 45.0);
    CHECK(q.psnr_db >= 45.0);
    CHECK(q.psnr_db <= 45.1);

    EncodeConfig cfg;
    cfg.dict_spec = "dct";
    const EncodeResult e = encode(sky, cfg);
    CHECK(e.decomposition.method == Method::DctThreshold);
    CHECK(e.decomposition.total_atoms() == q.total_atoms);
}

TEST_CASE("decode") {
    BlockDecomposition empty;
    empty.grid = partition(10, 12, 4);
    empty.blocks.resize(empty.grid.blocks.size());
    CHECK(decode(empty) == GrayImage(10, 12));
    empty.dict_spec = "bogus";
    CHECK_THROWS_AS(decode(empty), std::invalid_argument);
}

TEST_CASE("serialization round trip") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const BlockDecomposition dec = random_decomposition(rng);
        const auto bytes = serialize(dec);
        CHECK(deserialize(bytes) == dec);
    }
    const GrayImage sky = synth_starfield(20, 20, 5, 1);
    const BlockDecomposition real = encode(sky, EncodeConfig{}).decomposition;
    CHECK(deserialize(serialize(real)) == real);
}

TEST_CASE("serialization rejects corrupted input") {
    Rng rng(77);
    const BlockDecomposition dec = random_decomposition(rng);
    const auto bytes = serialize(dec);

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    try {
        deserialize(bad_magic);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 0);
    }

    for (std::size_t i = 4; i < bytes.size(); i += 7) {
        auto flipped = bytes;
        flipped[i] ^= 0x5A;
        CHECK_THROWS_AS(deserialize(flipped), FormatError);
    }
    auto truncated = bytes;
    truncated.resize(bytes.size() / 2);
    CHECK_THROWS_AS(deserialize(truncated), FormatError);
    CHECK_THROWS_AS(deserialize(std::vector<std::uint8_t>{}), FormatError);
}

TEST_CASE("empty blocks round trip") {
    BlockDecomposition dec;
    dec.grid = partition(16, 16, 8);
    dec.blocks.resize(4);
    dec.blocks[2].pairs = {{1, 2}};
    dec.blocks[2].coefficients = {3.5};
    CHECK(deserialize(serialize(dec)) == dec);
}
