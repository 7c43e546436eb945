#pragma once

#include <cstdint>
#include <random>

namespace sparsimg {

// Portable deterministic generator. std::mt19937_64 output is fixed by the
// standard; the distribution helpers below are written out so results do not
// depend on the standard library's distribution implementations.
class Rng {
public:
    static constexpr const char* algorithm = "mt19937_64+box-muller";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 bits of mantissa.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sparsimg
