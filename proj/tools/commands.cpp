#include "commands.hpp"

#include "sparsimg/blockcodec.hpp"
#include "sparsimg/chirp.hpp"
#include "sparsimg/imageio.hpp"
#include "sparsimg/metrics.hpp"
#include "sparsimg/random.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sparsimg::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string config_echo(const EncodeConfig& c) {
    return "# dict=" + c.dict_spec + " method=" + std::string(to_string(c.method)) + " block="
           + std::to_string(c.block_side) + " target_db=" + fmt("%g", c.target_db) + " p=" + std::to_string(c.p)
           + " eps=" + fmt("%g", c.eps_scale) + " cap_factor=" + std::to_string(c.cap_factor)
           + " rng=" + Rng::algorithm + "; seconds exclude dictionary construction and I/O";
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out || !(out << text)) {
        throw std::runtime_error("cannot write " + path);
    }
}

EncodeConfig encode_config(const std::string& dict, const std::string& method, int block, double target_db, int p,
                           double eps, int threads) {
    EncodeConfig c;
    c.dict_spec = dict;
    c.method = parse_method(method.empty() ? default_method(block) : method);
    c.block_side = block;
    c.target_db = target_db;
    c.p = p;
    c.eps_scale = eps;
    c.threads = threads;
    if (DictSpec::parse(dict).kind == DictSpec::Kind::Dct) {
        c.method = Method::DctThreshold;
    }
    if (c.method == Method::DctThreshold) {
        c.dict_spec = "dct";
    }
    return c;
}

QualityReport report_for(const std::string& name, const GrayImage& image, const EncodeResult& r) {
    const GrayImage approx = decode(r.decomposition);
    QualityReport q;
    q.image = name;
    q.dict = r.decomposition.dict_spec;
    q.method = std::string(to_string(r.decomposition.method));
    q.block = r.config.block_side;
    q.psnr_db = psnr(image, approx);
    q.sr = sparsity_ratio(r.decomposition);
    q.mssim = image.rows() >= 11 && image.cols() >= 11 ? mssim(image, approx) : std::nan("");
    q.total_atoms = r.decomposition.total_atoms();
    q.wall_time_s = r.seconds;
    return q;
}

}  // namespace

std::string default_method(int block) {
    return block <= 24 ? "omp2d" : "spmp2d";
}

int cmd_approximate(const RunConfig& cfg) {
    EncodeConfig config;
    GrayImage image;
    try {
        config = encode_config(cfg.dict, cfg.method, cfg.block, cfg.target_db, cfg.p, cfg.eps, cfg.threads);
        image = load_pgm_file(cfg.input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    EncodeResult result;
    try {
        result = encode(image, config);
    } catch (const EncodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    try {
        write_file(cfg.output, serialize(result.decomposition));
        const std::string recon =
            cfg.recon.empty() ? fs::path(cfg.output).replace_extension(".pgm").string() : cfg.recon;
        write_pgm_file(decode(result.decomposition), recon);
        const QualityReport q = report_for(fs::path(cfg.input).stem().string(), image, result);
        emit(cfg.report, config_echo(result.config) + "\n" + QualityReport::csv_header() + "\n" + q.csv_row() + "\n");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}

int cmd_reconstruct(const std::string& input, const std::string& output) {
    try {
        const BlockDecomposition dec = deserialize(read_file(input));
        write_pgm_file(decode(dec), output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}

int cmd_metrics(const std::string& reference, const std::string& approx, const std::string& decomposition) {
    try {
        const GrayImage a = load_pgm_file(reference);
        const GrayImage b = load_pgm_file(approx);
        QualityReport q;
        q.image = fs::path(reference).stem().string();
        q.dict = "NA";
        q.method = "NA";
        q.psnr_db = psnr(a, b);
        q.mssim = a.rows() >= 11 && a.cols() >= 11 ? mssim(a, b) : std::nan("");
        q.sr = std::nan("");
        q.wall_time_s = std::nan("");
        if (!decomposition.empty()) {
            const BlockDecomposition dec = deserialize(read_file(decomposition));
            q.dict = dec.dict_spec;
            q.method = std::string(to_string(dec.method));
            q.block = dec.grid.side;
            q.sr = sparsity_ratio(dec);
            q.total_atoms = dec.total_atoms();
        }
        std::cout << QualityReport::csv_header() << "\n" << q.csv_row() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}

int cmd_bench(const BenchConfig& cfg) {
    struct Input {
        std::string name;
        GrayImage image;
    };
    std::vector<Input> inputs;
    try {
        for (const std::string& path : cfg.images) {
            inputs.push_back({fs::path(path).stem().string(), load_pgm_file(path)});
        }
        const int stars = cfg.stars >= 0 ? cfg.stars : cfg.size * cfg.size / 200;
        for (int i = 0; i < cfg.synthetic; ++i) {
            inputs.push_back({"synth-" + std::to_string(i),
                              synth_starfield(cfg.size, cfg.size, stars, cfg.seed + static_cast<std::uint64_t>(i))});
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    if (inputs.empty()) {
        std::cerr << "error: no input images (give paths or --synthetic n)\n";
        return kIoError;
    }
    if (cfg.repeats < 1) {
        std::cerr << "error: --repeats must be >= 1\n";
        return kIoError;
    }

    std::ostringstream out;
    out << "# target_db=" << fmt("%g", cfg.target_db) << " p=" << cfg.p << " eps=" << fmt("%g", cfg.eps)
        << " repeats=" << cfg.repeats << "; seconds are means over repeats and exclude dictionary construction and I/O\n";
    out << QualityReport::csv_header() << "\n";
    for (const Input& in : inputs) {
        for (const std::string& method : cfg.methods) {
            const bool dct = method == "dct";
            const std::vector<std::string> dicts = dct ? std::vector<std::string>{"dct"} : cfg.dicts;
            for (const std::string& dict : dicts) {
                for (int block : cfg.blocks) {
                    try {
                        const EncodeConfig config =
                            encode_config(dict, method, block, cfg.target_db, cfg.p, cfg.eps, cfg.threads);
                        EncodeResult result = encode(in.image, config);
                        double seconds = result.seconds;
                        for (int r = 1; r < cfg.repeats; ++r) {
                            seconds += encode(in.image, config).seconds;
                        }
                        result.seconds = seconds / cfg.repeats;
                        out << report_for(in.name, in.image, result).csv_row() << "\n";
                    } catch (const std::exception& e) {
                        std::cerr << "warning: " << in.name << " " << method << " " << dict << " block " << block
                                  << ": " << e.what() << "\n";
                        out << in.name << "," << dict << "," << method << "," << block << ",NA,NA,NA,NA,NA\n";
                    }
                }
            }
        }
    }
    try {
        emit(cfg.csv, out.str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}

int cmd_chirp(const ChirpConfig& cfg) {
    std::vector<ChirpRow> rows;
    try {
        rows = run_chirp_experiment(cfg.n, cfg.rho_scale);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    bool ok = true;
    std::printf("%-12s %6s %4s %6s %13s %8s %9s  %s\n", "config", "M", "p", "K", "residual", "iters", "seconds",
                "band");
    for (const ChirpRow& r : rows) {
        std::printf("%-12s %6d %4d %6d %13.6e %8d %9.3f  %s%s\n", r.name.c_str(), r.m, r.p, r.k, r.residual_norm,
                    r.iterations, r.seconds, r.band.empty() ? "n/a" : r.band.c_str(),
                    r.band.empty() ? "" : (r.in_band ? " ok" : " FAIL"));
        ok = ok && r.in_band;
    }
    if (!cfg.csv.empty()) {
        std::string text = ChirpRow::csv_header() + "\n";
        for (const ChirpRow& r : rows) {
            text += r.csv_row() + "\n";
        }
        try {
            emit(cfg.csv, text);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kIoError;
        }
    }
    return ok ? kOk : kChirpBand;
}

}  // namespace sparsimg::cli
