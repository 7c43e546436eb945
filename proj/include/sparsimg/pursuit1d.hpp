#pragma once

#include "sparsimg/dictionary.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace sparsimg {

// Atomic decomposition of a 1D signal. For MP, indices are distinct and
// carry the accumulated coefficient of every selection of that atom.
struct Decomposition1D {
    std::vector<Eigen::Index> indices;
    std::vector<double> coefficients;
    double residual_norm = 0.0;
    int iterations = 0;                  // greedy selections over the full dictionary
    std::int64_t projection_steps = 0;   // SPMP inner MP steps restricted to S
    int direct_projections = 0;          // SPMP rounds finished by least squares on S
    bool converged = false;

    std::size_t size() const noexcept { return indices.size(); }
};

// One greedy selection against the full dictionary.
struct PursuitStep {
    int iteration = 0;
    Eigen::Index index = 0;
    double correlation = 0.0;            // signed <d, R^k>
    double residual_norm_before = 0.0;
    double residual_norm_after = 0.0;
};
using StepObserver = std::function<void(const PursuitStep&)>;

// Argmax of |values| with the lowest index winning ties.
Eigen::Index argmax_abs(const Vector& values);

// cos(2 pi t^2) on N equidistant points of [0, 8) starting at t = 0.
Vector chirp_signal(int n);

Decomposition1D mp(const Vector& f, const Dictionary1D& dict, double rho, int cap,
                   const StepObserver& observer = {});

// Orthogonal matching pursuit through Gram-Schmidt with one
// re-orthogonalization pass. cap must not exceed the signal length.
Decomposition1D omp(const Vector& f, const Dictionary1D& dict, double rho, int cap,
                    const StepObserver& observer = {});

struct SpmpOptions {
    double rho = 0.0;
    double eps = 0.0;                       // self-projection tolerance
    int p = 1;                              // MP selections per projection round
    int cap = 0;                            // total MP selections
    std::int64_t projection_cap = 50'000'000;  // total inner steps
    std::int64_t projection_budget = 1000;  // restricted steps per round per selected atom
};

// Self projected matching pursuit.
Decomposition1D spmp(const Vector& f, const Dictionary1D& dict, const SpmpOptions& options,
                     const StepObserver& observer = {});

Vector reconstruct1d(const Decomposition1D& dec, const Dictionary1D& dict);

}  // namespace sparsimg
