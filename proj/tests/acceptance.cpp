// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include "sparsimg/blockcodec.hpp"
#include "sparsimg/chirp.hpp"
#include "sparsimg/imageio.hpp"
#include "sparsimg/metrics.hpp"
#include "sparsimg/pursuit1d.hpp"
#include "sparsimg/pursuit2d.hpp"
#include "sparsimg/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

using namespace sparsimg;

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kImages = 10;
constexpr double kTargetDb = 45.0;

int failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s %2d  %s  [%s]\n", ok ? "PASS" : "FAIL", criterion, what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string fmt(const char* spec, auto... v) {
    char buf[256];
    std::snprintf(buf, sizeof buf, spec, v...);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const ChirpRow& row(const std::vector<ChirpRow>& rows, const std::string& name) {
    for (const ChirpRow& r : rows) {
        if (r.name == name) return r;
    }
    throw std::runtime_error("missing chirp row " + name);
}

Matrix random_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = rng.normal();
        }
    }
    return m;
}

Dictionary1D random_dictionary(int n, int m, Rng& rng) {
    Matrix atoms = random_matrix(n, m, rng);
    for (Eigen::Index j = 0; j < m; ++j) {
        atoms.col(j) /= atoms.col(j).norm();
    }
    return Dictionary1D(std::move(atoms), std::vector<std::string>(static_cast<std::size_t>(m), "R"));
}

Dictionary1D kronecker(const Dictionary1D& dx, const Dictionary1D& dy) {
    Matrix atoms(dx.length() * dy.length(), dx.size() * dy.size());
    for (Eigen::Index n = 0; n < dx.size(); ++n) {
        for (Eigen::Index m = 0; m < dy.size(); ++m) {
            atoms.col(n * dy.size() + m) = (dx.atom(n) * dy.atom(m).transpose()).reshaped();
        }
    }
    return Dictionary1D(std::move(atoms), std::vector<std::string>(static_cast<std::size_t>(atoms.cols()), "K"));
}

BlockDecomposition random_decomposition(Rng& rng) {
    BlockDecomposition dec;
    const int nx = 1 + static_cast<int>(rng.below(64));
    const int ny = 1 + static_cast<int>(rng.below(64));
    dec.grid = partition(nx, ny, 1 + static_cast<int>(rng.below(24)));
    dec.dict_spec = rng.below(2) == 0 ? "mixed" : "rr:" + std::to_string(rng.below(1000));
    dec.target_db = rng.uniform(20.0, 60.0);
    dec.method = static_cast<Method>(1 + rng.below(4));
    for (const BlockRect& rect : dec.grid.blocks) {
        BlockCode code;
        const auto k = rng.below(static_cast<std::uint64_t>(rect.area()) + 1);
        for (std::uint64_t i = 0; i < k; ++i) {
            code.pairs.push_back({static_cast<std::uint32_t>(rng.below(200)), static_cast<std::uint32_t>(rng.below(200))});
            code.coefficients.push_back(rng.normal() * 100.0);
        }
        dec.blocks.push_back(std::move(code));
    }
    return dec;
}

struct Encoded {
    EncodeResult result;
    double psnr_db = 0.0;
    double mssim = 0.0;
    double sr = 0.0;
};

Encoded run(const GrayImage& image, Method method, int block, int threads = 1) {
    EncodeConfig cfg;
    cfg.method = method;
    cfg.block_side = block;
    cfg.target_db = kTargetDb;
    cfg.threads = threads;
    Encoded e;
    e.result = encode(image, cfg);
    const GrayImage approx = decode(e.result.decomposition);
    e.psnr_db = psnr(image, approx);
    e.mssim = mssim(image, approx);
    e.sr = sparsity_ratio(e.result.decomposition);
    return e;
}

// Synthetic star-fields at one star per 200 pixels.
std::vector<GrayImage> corpus(int side) {
    std::vector<GrayImage> images;
    for (int i = 0; i < kImages; ++i) {
        images.push_back(synth_starfield(side, side, side * side / 200, static_cast<std::uint64_t>(1 + i)));
    }
    return images;
}

struct EnergyCheck {
    double worst = 0.0;
    long steps = 0;

    void add(double before, double correlation, double after) {
        const double lhs = before * before;
        worst = std::max(worst, std::abs(lhs - (correlation * correlation + after * after)) / lhs);
        ++steps;
    }
};

void chirp_criteria(EnergyCheck& energy) {
    const std::vector<ChirpRow> rows = run_chirp_experiment(2000, 1.0, [&](const PursuitStep& s) {
        energy.add(s.residual_norm_before, s.correlation, s.residual_norm_after);
    });
    const ChirpRow& dc = row(rows, "dc-omp");
    const ChirpRow& rdc = row(rows, "rdc-omp");
    const ChirpRow& mpr = row(rows, "rdc-mp");
    const ChirpRow& sp3 = row(rows, "rdc-spmp3");
    const ChirpRow& sp10 = row(rows, "rdc-spmp10");

    report(1, std::abs(dc.k - 683) <= 5 && dc.seconds < 5.0, "chirp OMP over DC: K = 683 +- 5 in < 5 s",
           fmt("K=%d %.2f s", dc.k, dc.seconds));
    report(2, rdc.k >= 272 && rdc.k <= 300 && rdc.seconds < 60.0, "chirp OMP over RDC(2000,4000): K in [272, 300] in < 60 s",
           fmt("K=%d %.2f s", rdc.k, rdc.seconds));
    report(3, mpr.k >= 1556 && mpr.k <= 1720, "chirp MP over RDC: K in [1556, 1720]",
           fmt("K=%d iterations=%d", mpr.k, mpr.iterations));
    report(4, std::abs(sp3.k - rdc.k) <= 5 && sp10.k >= 285 && sp10.k <= 315,
           "chirp SPMP: p=3 within 5 of OMP, p=10 in [285, 315]",
           fmt("p=3 K=%d (OMP %d), p=10 K=%d", sp3.k, rdc.k, sp10.k));
}

void kronecker_criterion() {
    Rng rng(17);
    double worst = 0.0;
    bool same = true;
    const auto t0 = Clock::now();
    for (int trial = 0; trial < 100; ++trial) {
        const int mx = 4 + static_cast<int>(rng.below(5));
        const int my = 4 + static_cast<int>(rng.below(5));
        const Dictionary1D dx = random_dictionary(4, mx, rng);
        const Dictionary1D dy = random_dictionary(4, my, rng);
        const Matrix image = random_matrix(4, 4, rng);
        const double rho = 1e-6 * image.norm();
        const Decomposition2D two = omp2d(image, dx, dy, rho, 16);
        const Decomposition1D one = omp(image.reshaped(), kronecker(dx, dy), rho, 16);
        if (two.size() != one.size()) {
            same = false;
            continue;
        }
        for (std::size_t n = 0; n < one.size(); ++n) {
            const auto idx = static_cast<std::uint32_t>(one.indices[n]);
            const auto umy = static_cast<std::uint32_t>(my);
            same = same && two.pairs[n] == AtomPair{idx / umy, idx % umy};
            worst = std::max(worst, std::abs(two.coefficients[n] - one.coefficients[n]));
        }
    }
    const double secs = seconds_since(t0);
    report(5, same && worst < 1e-8 && secs < 10.0, "OMP2D equals 1D OMP over the Kronecker dictionary (100 trials)",
           fmt("same selections=%s max |dc|=%.2e %.2f s", same ? "yes" : "no", worst, secs));
}

void biorthogonality_criterion() {
    Rng rng(8);
    const Dictionary1D d = build_mixed(16);
    double worst = 0.0;
    int steps = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix image = 255.0 * random_matrix(16, 16, rng);
        omp2d(image, d, d, 1e-9, 20, [&](const BiorthogonalState& s) {
            const std::size_t k = s.size();
            for (std::size_t n = 0; n < k; ++n) {
                const Matrix a = s.atom(n);
                for (std::size_t m = 0; m < k; ++m) {
                    worst = std::max(worst, std::abs(frobenius_ip(a, s.reciprocal(m)) - (n == m ? 1.0 : 0.0)));
                }
            }
            ++steps;
        });
    }
    report(6, worst < 1e-8 && steps == 20 * 20, "biorthogonality <A_n, B_m^k> = delta for k <= 20",
           fmt("%d steps, max deviation %.2e", steps, worst));
}

void energy_criterion(const EnergyCheck& chirp, const std::vector<GrayImage>& small,
                      const std::vector<GrayImage>& large) {
    EnergyCheck blocks;
    const Dictionary1D d = build_mixed(16);
    for (const auto* set : {&small, &large}) {
        for (const GrayImage& image : *set) {
            const BlockGrid grid = partition(static_cast<int>(image.rows()), static_cast<int>(image.cols()), 16);
            const double rho = rho_for_psnr(kTargetDb, static_cast<int>(image.rows()), static_cast<int>(image.cols()));
            const double total_area = static_cast<double>(image.rows() * image.cols());
            for (const BlockRect& r : grid.blocks) {
                const Matrix block = image.pixels().block(r.row0, r.col0, r.rows, r.cols);
                const double tol = rho * std::sqrt(r.area() / total_area);
                const Dictionary1D dx = r.rows == 16 ? d : build_mixed(r.rows);
                const Dictionary1D dy = r.cols == 16 ? d : build_mixed(r.cols);
                mp2d(block, dx, dy, tol, 10 * r.area(), [&](const PursuitStep2D& s) {
                    blocks.add(s.residual_norm_before, s.correlation, s.residual_norm_after);
                });
            }
        }
    }
    report(7, chirp.worst <= 1e-10 && blocks.worst <= 1e-10, "energy conservation at every MP and MP2D step",
           fmt("chirp MP %ld steps %.2e, corpus MP2D %ld steps %.2e", chirp.steps, chirp.worst, blocks.steps,
               blocks.worst));
}

}  // namespace

int main() {
    try {
        const auto t0 = Clock::now();
        EnergyCheck chirp_energy;
        chirp_criteria(chirp_energy);
        kronecker_criterion();
        biorthogonality_criterion();

        const std::vector<GrayImage> small = corpus(64);
        const std::vector<GrayImage> large = corpus(256);
        energy_criterion(chirp_energy, small, large);

        // SPMP2D with p = 1 against OMP2D on the 64 x 64 corpus.
        bool c8 = true;
        double worst_gap = 0.0;
        double min_db = INFINITY;
        double min_mssim = INFINITY;
        std::vector<Encoded> omp_small;
        for (const GrayImage& image : small) {
            Encoded o = run(image, Method::Omp2d, 16);
            const Encoded s = run(image, Method::Spmp2d, 16);
            const double a = static_cast<double>(o.result.decomposition.total_atoms());
            const double b = static_cast<double>(s.result.decomposition.total_atoms());
            const double gap = std::abs(a - b) / a;
            worst_gap = std::max(worst_gap, gap);
            min_db = std::min({min_db, o.psnr_db, s.psnr_db});
            min_mssim = std::min({min_mssim, o.mssim, s.mssim});
            c8 = c8 && gap <= 0.02 && o.psnr_db >= kTargetDb && s.psnr_db >= kTargetDb;
            omp_small.push_back(std::move(o));
        }
        report(8, c8, "SPMP2D (p=1) and OMP2D atom totals within 2%, both PSNR >= 45 dB (10 x 64x64)",
               fmt("worst gap %.2f%%, min PSNR %.3f dB", 100.0 * worst_gap, min_db));

        // Mixed OMP2D against the DCT baseline on the 256 x 256 corpus.
        bool c9 = true;
        double ratio_sum = 0.0;
        double sr16 = 0.0;
        double sr8 = 0.0;
        std::vector<Encoded> omp_large;
        for (const GrayImage& image : large) {
            Encoded o16 = run(image, Method::Omp2d, 16);
            const Encoded o8 = run(image, Method::Omp2d, 8);
            const QualityReport dct = dct_baseline(image, 16, kTargetDb);
            c9 = c9 && o16.sr > dct.sr;
            ratio_sum += o16.sr / dct.sr;
            sr16 += o16.sr;
            sr8 += o8.sr;
            min_db = std::min({min_db, o16.psnr_db, o8.psnr_db});
            min_mssim = std::min({min_mssim, o16.mssim, o8.mssim, dct.mssim});
            omp_large.push_back(std::move(o16));
        }
        const double mean_ratio = ratio_sum / kImages;
        report(9, c9 && mean_ratio >= 1.5, "SR(mixed OMP2D) > SR(DCT) on every image, mean ratio >= 1.5 (10 x 256x256, block 16)",
               fmt("mean ratio %.3f", mean_ratio));
        report(10, sr16 > sr8, "mean SR at block 16 exceeds block 8",
               fmt("block 16 %.3f, block 8 %.3f", sr16 / kImages, sr8 / kImages));
        report(11, min_mssim > 0.98, "MSSIM > 0.98 for every 45 dB encode", fmt("min MSSIM %.5f", min_mssim));

        // Worker count must not change the serialized output.
        const int many = std::max(4, static_cast<int>(std::thread::hardware_concurrency()));
        bool c12 = true;
        int compared = 0;
        for (const auto* pair : {&small, &large}) {
            const std::vector<Encoded>& ones = pair == &small ? omp_small : omp_large;
            for (std::size_t i = 0; i < pair->size(); ++i) {
                const Encoded parallel = run((*pair)[i], Method::Omp2d, 16, many);
                c12 = c12 && serialize(parallel.result.decomposition) == serialize(ones[i].result.decomposition);
                ++compared;
            }
        }
        report(12, c12, "1 thread and many threads give byte-identical files",
               fmt("%d images, %d threads", compared, many));

        // Randomized round trips and single-byte corruption.
        Rng rng(13);
        bool c13 = true;
        int detected = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const BlockDecomposition dec = random_decomposition(rng);
            const std::vector<std::uint8_t> bytes = serialize(dec);
            c13 = c13 && deserialize(bytes) == dec;
            std::vector<std::uint8_t> bad = bytes;
            const std::size_t at = 4 + rng.below(bytes.size() - 4);
            bad[at] ^= static_cast<std::uint8_t>(1 + rng.below(255));
            try {
                deserialize(bad);
            } catch (const FormatError& e) {
                if (std::string(e.what()).find("checksum") != std::string::npos) ++detected;
            }
        }
        report(13, c13 && detected == 1000, "1000 random round trips, single-byte corruption detected by checksum",
               fmt("round trips %s, detected %d/1000", c13 ? "exact" : "MISMATCH", detected));

        std::printf("%d failed, %.1f s total\n", failures, seconds_since(t0));
    } catch (const std::exception& e) {
        std::printf("FAIL    acceptance aborted: %s\n", e.what());
        return EXIT_FAILURE;
    }
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
