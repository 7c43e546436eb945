#pragma once

#include "sparsimg/dictionary.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace sparsimg {

// Row-atom index into Dx and column-atom index into Dy (0-based).
struct AtomPair {
    std::uint32_t x = 0;
    std::uint32_t y = 0;

    auto operator<=>(const AtomPair&) const = default;
};

struct Decomposition2D {
    std::vector<AtomPair> pairs;
    std::vector<double> coefficients;
    double residual_norm = 0.0;          // Frobenius
    int iterations = 0;                  // selections over the full separable dictionary
    std::int64_t projection_steps = 0;   // SPMP2D restricted MP steps
    int direct_projections = 0;          // SPMP2D rounds finished by least squares
    bool converged = false;

    std::size_t size() const noexcept { return pairs.size(); }
};

struct PairSelection {
    AtomPair pair;
    double value = 0.0;  // signed Frobenius inner product with the residual
};

struct PursuitStep2D {
    int iteration = 0;
    AtomPair pair;
    double correlation = 0.0;
    double residual_norm_before = 0.0;
    double residual_norm_after = 0.0;
};
using StepObserver2D = std::function<void(const PursuitStep2D&)>;

double frobenius_ip(const Matrix& a, const Matrix& b);

// Maximizes |dx_n^T R dy_m| through two dense products; ties go to the
// lowest n, then the lowest m.
PairSelection select_atom_pair(const Matrix& residual, const Dictionary1D& dx, const Dictionary1D& dy);

// Orthogonalized atoms C_n and reciprocal matrices B_n^k for the pairs
// selected so far by OMP2D.
class BiorthogonalState {
public:
    // Returns false (state unchanged) when the new rank-1 atom is numerically
    // dependent on the current span.
    bool append(AtomPair pair, const Vector& dx_atom, const Vector& dy_atom);

    std::size_t size() const noexcept { return pairs_.size(); }
    const std::vector<AtomPair>& pairs() const noexcept { return pairs_; }
    const Matrix& reciprocal(std::size_t n) const { return reciprocal_[n]; }
    const Matrix& orthogonal(std::size_t n) const { return orthogonal_[n]; }
    double orthogonal_norm2(std::size_t n) const { return norm2_[n]; }

    // Selected rank-1 atom A_n.
    Matrix atom(std::size_t n) const { return atoms_x_[n] * atoms_y_[n].transpose(); }

    // c^k(n) = <B_n^k, I>_F.
    std::vector<double> coefficients(const Matrix& image) const;

private:
    std::vector<AtomPair> pairs_;
    std::vector<Vector> atoms_x_;
    std::vector<Vector> atoms_y_;
    std::vector<Matrix> reciprocal_;
    std::vector<Matrix> orthogonal_;
    std::vector<double> norm2_;
};
using StateObserver = std::function<void(const BiorthogonalState&)>;

Decomposition2D mp2d(const Matrix& image, const Dictionary1D& dx, const Dictionary1D& dy, double rho, int cap,
                     const StepObserver2D& observer = {});

Decomposition2D omp2d(const Matrix& image, const Dictionary1D& dx, const Dictionary1D& dy, double rho, int cap,
                      const StateObserver& observer = {});

struct Spmp2dOptions {
    double rho = 0.0;
    double eps = 0.0;
    int p = 1;
    int cap = 0;                             // total MP selections
    std::int64_t projection_cap = 50'000'000;
    std::int64_t projection_budget = 1000;  // restricted steps per round per selected atom
};

// Fires after every restricted-projection exit with the current pairs and residual.
using ProjectionObserver = std::function<void(const std::vector<AtomPair>&, const Matrix&)>;

Decomposition2D spmp2d(const Matrix& image, const Dictionary1D& dx, const Dictionary1D& dy,
                       const Spmp2dOptions& options, const StepObserver2D& observer = {},
                       const ProjectionObserver& on_projection = {});

Matrix reconstruct2d(const Decomposition2D& dec, const Dictionary1D& dx, const Dictionary1D& dy);
Matrix reconstruct2d(const std::vector<AtomPair>& pairs, const std::vector<double>& coefficients,
                     const Dictionary1D& dx, const Dictionary1D& dy);

}  // namespace sparsimg
