#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sparsimg::cli {

enum ExitCode : int {
    kOk = 0,
    kIoError = 1,
    kNotConverged = 2,
    kChirpBand = 3,
};

struct RunConfig {
    std::string input;
    std::string output;
    std::string recon;
    std::string report;
    std::string dict = "mixed";
    std::string method;          // empty: omp2d for block <= 24, spmp2d above
    int block = 16;
    double target_db = 45.0;
    int p = 1;
    double eps = 1e-9;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct BenchConfig {
    std::vector<std::string> images;
    int synthetic = 0;
    int size = 256;
    int stars = -1;              // negative: one star per 200 pixels
    std::uint64_t seed = 1;
    std::vector<int> blocks{8, 16, 24, 32, 40, 48};
    std::vector<std::string> methods{"omp2d", "spmp2d"};
    std::vector<std::string> dicts{"mixed"};
    int repeats = 5;
    double target_db = 45.0;
    int p = 1;
    double eps = 1e-9;
    int threads = 0;
    std::string csv;
};

struct ChirpConfig {
    int n = 2000;
    double rho_scale = 1.0;
    std::string csv;
};

std::string default_method(int block);

int cmd_approximate(const RunConfig& cfg);
int cmd_reconstruct(const std::string& input, const std::string& output);
int cmd_metrics(const std::string& reference, const std::string& approx, const std::string& decomposition);
int cmd_bench(const BenchConfig& cfg);
int cmd_chirp(const ChirpConfig& cfg);

}  // namespace sparsimg::cli
