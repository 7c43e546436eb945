#include "sparsimg/blockcodec.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace sparsimg {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Mp2d: return "mp2d";
        case Method::Omp2d: return "omp2d";
        case Method::Spmp2d: return "spmp2d";
        case Method::DctThreshold: return "dct";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    if (text == "mp2d") return Method::Mp2d;
    if (text == "omp2d") return Method::Omp2d;
    if (text == "spmp2d") return Method::Spmp2d;
    if (text == "dct") return Method::DctThreshold;
    throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

BlockGrid partition(int nx, int ny, int side) {
    if (side < 1) {
        throw std::invalid_argument("partition: block side must be >= 1");
    }
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("partition: image dimensions must be positive");
    }
    BlockGrid grid{nx, ny, side, {}};
    for (int r = 0; r < nx; r += side) {
        for (int c = 0; c < ny; c += side) {
            grid.blocks.push_back({r, c, std::min(side, nx - r), std::min(side, ny - c)});
        }
    }
    return grid;
}

std::size_t BlockDecomposition::total_atoms() const {
    std::size_t n = 0;
    for (const BlockCode& b : blocks) {
        n += b.size();
    }
    return n;
}

double rho_for_psnr(double target_db, int nx, int ny) {
    return kPeak * std::sqrt(static_cast<double>(nx) * ny) * std::pow(10.0, -target_db / 20.0);
}

namespace {

using DictCache = std::map<int, Dictionary1D>;

DictCache build_dictionaries(const DictSpec& spec, const BlockGrid& grid) {
    DictCache cache;
    for (const BlockRect& rect : grid.blocks) {
        for (int n : {rect.rows, rect.cols}) {
            if (!cache.contains(n)) {
                cache.emplace(n, build_for_spec(spec, n));
            }
        }
    }
    return cache;
}

double block_tolerance(double rho, const BlockRect& rect, const BlockGrid& grid) {
    return rho * std::sqrt(static_cast<double>(rect.area()) / (static_cast<double>(grid.nx) * grid.ny));
}

int worker_count(int requested, std::size_t jobs) {
    unsigned n = requested > 0 ? static_cast<unsigned>(requested) : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on the given number of workers. Rethrows
// the failure with the lowest index.
template <typename Job>
void run_parallel(std::size_t count, int workers, Job job) {
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

Decomposition2D approximate_block(const Matrix& block, const Dictionary1D& dx, const Dictionary1D& dy, double tol,
                                  const EncodeConfig& config) {
    const int area = static_cast<int>(block.size());
    switch (config.method) {
        case Method::Mp2d:
            return mp2d(block, dx, dy, tol, config.cap_factor * area);
        case Method::Omp2d:
            return omp2d(block, dx, dy, tol, area);
        case Method::Spmp2d: {
            Spmp2dOptions opt;
            opt.rho = tol;
            opt.eps = config.eps_scale * block.norm();
            opt.p = config.p;
            opt.cap = config.cap_factor * area;
            return spmp2d(block, dx, dy, opt);
        }
        case Method::DctThreshold:
            break;
    }
    throw std::invalid_argument("approximate_block: unsupported method");
}

}  // namespace

EncodeResult encode(const GrayImage& image, const EncodeConfig& config) {
    if (image.empty()) {
        throw std::invalid_argument("encode: empty image");
    }
    if (config.p < 1) {
        throw std::invalid_argument("encode: p must be >= 1");
    }
    if (config.cap_factor < 1) {
        throw std::invalid_argument("encode: cap factor must be >= 1");
    }
    const DictSpec spec = DictSpec::parse(config.dict_spec);
    const int nx = static_cast<int>(image.rows());
    const int ny = static_cast<int>(image.cols());

    EncodeResult result;
    result.config = config;
    if (spec.kind == DictSpec::Kind::Dct || config.method == Method::DctThreshold) {
        result.config.dict_spec = "dct";
        result.config.method = Method::DctThreshold;
        const auto start = std::chrono::steady_clock::now();
        result.decomposition = dct_threshold(image, config.block_side, config.target_db);
        result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const Matrix residual = image.pixels() - decode(result.decomposition).pixels();
        const double rho = rho_for_psnr(config.target_db, nx, ny);
        for (const BlockRect& rect : result.decomposition.grid.blocks) {
            BlockStats s;
            s.tolerance = block_tolerance(rho, rect, result.decomposition.grid);
            s.residual_norm = residual.block(rect.row0, rect.col0, rect.rows, rect.cols).norm();
            result.stats.push_back(s);
        }
        return result;
    }

    BlockDecomposition& dec = result.decomposition;
    dec.grid = partition(nx, ny, config.block_side);
    dec.dict_spec = spec.str();
    dec.target_db = config.target_db;
    dec.method = config.method;
    dec.blocks.resize(dec.grid.blocks.size());
    result.stats.resize(dec.grid.blocks.size());

    const DictCache dicts = build_dictionaries(spec, dec.grid);
    const double rho = rho_for_psnr(config.target_db, nx, ny);

    const auto start = std::chrono::steady_clock::now();
    run_parallel(dec.grid.blocks.size(), worker_count(config.threads, dec.grid.blocks.size()), [&](std::size_t h) {
        const BlockRect& rect = dec.grid.blocks[h];
        const Matrix block = image.pixels().block(rect.row0, rect.col0, rect.rows, rect.cols);
        BlockStats& stats = result.stats[h];
        stats.tolerance = block_tolerance(rho, rect, dec.grid);
        const double norm = block.norm();
        if (norm == 0.0 || norm < stats.tolerance) {
            stats.residual_norm = norm;
            return;
        }
        const Decomposition2D d =
            approximate_block(block, dicts.at(rect.rows), dicts.at(rect.cols), stats.tolerance, config);
        stats.residual_norm = d.residual_norm;
        stats.iterations = d.iterations;
        stats.projection_steps = d.projection_steps;
        if (!d.converged) {
            throw EncodeError(std::string(to_string(config.method)) + " did not reach tolerance "
                                  + std::to_string(stats.tolerance) + " (residual " + std::to_string(d.residual_norm)
                                  + ")",
                              rect);
        }
        dec.blocks[h] = BlockCode{d.pairs, d.coefficients};
    });
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

GrayImage decode(const BlockDecomposition& dec) {
    if (dec.blocks.size() != dec.grid.blocks.size()) {
        throw std::invalid_argument("decode: block count does not match the grid");
    }
    const DictSpec spec = DictSpec::parse(dec.dict_spec);
    const DictCache dicts = build_dictionaries(spec, dec.grid);
    Matrix out = Matrix::Zero(dec.grid.nx, dec.grid.ny);
    for (std::size_t h = 0; h < dec.blocks.size(); ++h) {
        const BlockRect& rect = dec.grid.blocks[h];
        const BlockCode& code = dec.blocks[h];
        if (code.pairs.empty()) {
            continue;
        }
        const Dictionary1D& dx = dicts.at(rect.rows);
        const Dictionary1D& dy = dicts.at(rect.cols);
        for (const AtomPair& p : code.pairs) {
            if (p.x >= static_cast<std::uint32_t>(dx.size()) || p.y >= static_cast<std::uint32_t>(dy.size())) {
                throw std::out_of_range("decode: atom index outside the dictionary");
            }
        }
        out.block(rect.row0, rect.col0, rect.rows, rect.cols) = reconstruct2d(code.pairs, code.coefficients, dx, dy);
    }
    return GrayImage(std::move(out));
}

BlockDecomposition dct_threshold(const GrayImage& image, int block_side, double target_db) {
    if (image.empty()) {
        throw std::invalid_argument("dct_threshold: empty image");
    }
    const int nx = static_cast<int>(image.rows());
    const int ny = static_cast<int>(image.cols());
    BlockDecomposition dec;
    dec.grid = partition(nx, ny, block_side);
    dec.dict_spec = "dct";
    dec.target_db = target_db;
    dec.method = Method::DctThreshold;
    dec.blocks.resize(dec.grid.blocks.size());

    const DictCache dicts = build_dictionaries(DictSpec{DictSpec::Kind::Dct, 0}, dec.grid);
    struct Coef {
        double value;
        std::uint32_t block, x, y;
    };
    std::vector<Coef> all;
    all.reserve(static_cast<std::size_t>(nx) * ny);
    for (std::size_t h = 0; h < dec.grid.blocks.size(); ++h) {
        const BlockRect& rect = dec.grid.blocks[h];
        const Matrix g = dicts.at(rect.rows).atoms().transpose()
                         * image.pixels().block(rect.row0, rect.col0, rect.rows, rect.cols)
                         * dicts.at(rect.cols).atoms();
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            for (Eigen::Index i = 0; i < g.rows(); ++i) {
                all.push_back({g(i, j), static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(i),
                               static_cast<std::uint32_t>(j)});
            }
        }
    }
    // Orthonormal bases: the squared error equals the dropped energy, so drop
    // the smallest coefficients while the budget allows.
    std::stable_sort(all.begin(), all.end(),
                     [](const Coef& a, const Coef& b) { return std::abs(a.value) > std::abs(b.value); });
    const double rho = rho_for_psnr(target_db, nx, ny);
    const double budget = rho * rho;
    double dropped = 0.0;
    std::size_t keep = all.size();
    while (keep > 0) {
        const double e = all[keep - 1].value * all[keep - 1].value;
        if (dropped + e >= budget) {
            break;
        }
        dropped += e;
        --keep;
    }
    all.resize(keep);
    std::sort(all.begin(), all.end(), [](const Coef& a, const Coef& b) {
        return std::tie(a.block, a.x, a.y) < std::tie(b.block, b.x, b.y);
    });
    for (const Coef& c : all) {
        dec.blocks[c.block].pairs.push_back({c.x, c.y});
        dec.blocks[c.block].coefficients.push_back(c.value);
    }
    return dec;
}

QualityReport dct_baseline(const GrayImage& image, int block_side, double target_db) {
    const auto start = std::chrono::steady_clock::now();
    const BlockDecomposition dec = dct_threshold(image, block_side, target_db);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const GrayImage approx = decode(dec);
    QualityReport r;
    r.dict = "dct";
    r.method = "dct";
    r.block = block_side;
    r.psnr_db = psnr(image, approx);
    r.sr = sparsity_ratio(dec);
    r.mssim = image.rows() >= 11 && image.cols() >= 11 ? mssim(image, approx) : std::nan("");
    r.total_atoms = dec.total_atoms();
    r.wall_time_s = seconds;
    return r;
}

}  // namespace sparsimg
