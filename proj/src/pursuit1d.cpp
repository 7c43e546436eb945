#include "sparsimg/pursuit1d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sparsimg {

namespace {

constexpr int kMaxDirectSolves = 3;

void check_inputs(const Vector& f, const Dictionary1D& dict, double rho, int cap) {
    if (f.size() != dict.length()) {
        throw std::invalid_argument("pursuit: signal length does not match atom length");
    }
    if (!(rho > 0.0)) {
        throw std::invalid_argument("pursuit: rho must be > 0");
    }
    if (cap < 1) {
        throw std::invalid_argument("pursuit: cap must be >= 1");
    }
}

// Accumulates coefficients per atom while keeping first-selection order.
class CoefficientBook {
public:
    explicit CoefficientBook(Eigen::Index atoms) : slot_(static_cast<std::size_t>(atoms), -1) {}

    // Returns the slot of the atom, creating it if new.
    std::size_t add(Eigen::Index atom, double amount) {
        auto& slot = slot_[static_cast<std::size_t>(atom)];
        if (slot < 0) {
            slot = static_cast<std::ptrdiff_t>(indices_.size());
            indices_.push_back(atom);
            coefficients_.push_back(0.0);
        }
        coefficients_[static_cast<std::size_t>(slot)] += amount;
        return static_cast<std::size_t>(slot);
    }

    std::vector<Eigen::Index>& indices() { return indices_; }
    std::vector<double>& coefficients() { return coefficients_; }

private:
    std::vector<std::ptrdiff_t> slot_;
    std::vector<Eigen::Index> indices_;
    std::vector<double> coefficients_;
};

}  // namespace

Eigen::Index argmax_abs(const Vector& values) {
    Eigen::Index best = 0;
    double best_value = -1.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = std::abs(values(i));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

Vector chirp_signal(int n) {
    if (n < 2) {
        throw std::invalid_argument("chirp_signal: N must be >= 2");
    }
    Vector f(n);
    for (int i = 0; i < n; ++i) {
        const double t = 8.0 * i / n;
        f(i) = std::cos(2.0 * std::numbers::pi * t * t);
    }
    return f;
}

Decomposition1D mp(const Vector& f, const Dictionary1D& dict, double rho, int cap, const StepObserver& observer) {
    check_inputs(f, dict, rho, cap);
    const Matrix& atoms = dict.atoms();
    Vector residual = f;
    double norm = residual.norm();
    CoefficientBook book(dict.size());
    Decomposition1D out;

    while (norm >= rho) {
        if (out.iterations >= cap) {
            break;
        }
        const Vector g = atoms.transpose() * residual;
        const Eigen::Index l = argmax_abs(g);
        const double a = g(l);
        if (a == 0.0) {
            break;  // residual orthogonal to every atom
        }
        residual.noalias() -= a * atoms.col(l);
        book.add(l, a);
        const double before = norm;
        norm = residual.norm();
        ++out.iterations;
        if (observer) {
            observer({out.iterations, l, a, before, norm});
        }
    }
    out.indices = std::move(book.indices());
    out.coefficients = std::move(book.coefficients());
    out.residual_norm = norm;
    out.converged = norm < rho;
    return out;
}

Decomposition1D omp(const Vector& f, const Dictionary1D& dict, double rho, int cap, const StepObserver& observer) {
    check_inputs(f, dict, rho, cap);
    if (cap > f.size()) {
        throw std::invalid_argument("omp: cap must not exceed the signal length");
    }
    const Matrix& atoms = dict.atoms();
    const Eigen::Index n = f.size();

    // Orthonormal basis Q of the selected span and the triangular factor
    // with atoms(:, selected) = Q * upper.
    Matrix q(n, cap);
    Matrix upper = Matrix::Zero(cap, cap);
    Vector projections(cap);  // q_j . f
    std::vector<bool> excluded(static_cast<std::size_t>(dict.size()), false);
    std::vector<Eigen::Index> selected;

    Vector residual = f;
    double norm = residual.norm();
    Decomposition1D out;

    while (norm >= rho && static_cast<int>(selected.size()) < cap) {
        Vector g = atoms.transpose() * residual;
        for (std::size_t i = 0; i < excluded.size(); ++i) {
            if (excluded[i]) {
                g(static_cast<Eigen::Index>(i)) = 0.0;
            }
        }
        const Eigen::Index k = static_cast<Eigen::Index>(selected.size());
        Eigen::Index l = -1;
        Vector remainder;
        while (true) {
            const Eigen::Index candidate = argmax_abs(g);
            if (g(candidate) == 0.0) {
                break;
            }
            remainder = atoms.col(candidate);
            Vector coeffs = Vector::Zero(k);
            for (int pass = 0; pass < 2; ++pass) {
                const Vector c = q.leftCols(k).transpose() * remainder;
                remainder.noalias() -= q.leftCols(k) * c;
                coeffs += c;
            }
            const double rnorm = remainder.norm();
            if (rnorm < 1e-10) {
                excluded[static_cast<std::size_t>(candidate)] = true;
                g(candidate) = 0.0;
                continue;
            }
            l = candidate;
            upper.col(k).head(k) = coeffs;
            upper(k, k) = rnorm;
            remainder /= rnorm;
            break;
        }
        if (l < 0) {
            break;
        }
        q.col(k) = remainder;
        projections(k) = remainder.dot(f);
        excluded[static_cast<std::size_t>(l)] = true;
        selected.push_back(l);

        const double before = norm;
        residual.noalias() -= remainder.dot(residual) * remainder;
        norm = residual.norm();
        ++out.iterations;
        if (observer) {
            observer({out.iterations, l, g(l), before, norm});
        }
    }

    const Eigen::Index k = static_cast<Eigen::Index>(selected.size());
    const Vector coefficients = upper.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(projections.head(k));
    out.indices = std::move(selected);
    out.coefficients.assign(coefficients.data(), coefficients.data() + k);
    out.residual_norm = norm;
    out.converged = norm < rho;
    return out;
}

Decomposition1D spmp(const Vector& f, const Dictionary1D& dict, const SpmpOptions& options, const StepObserver& observer) {
    check_inputs(f, dict, options.rho, options.cap);
    if (options.p < 1) {
        throw std::invalid_argument("spmp: p must be >= 1");
    }
    if (!(options.eps > 0.0)) {
        throw std::invalid_argument("spmp: eps must be > 0");
    }
    if (options.projection_budget < 1) {
        throw std::invalid_argument("spmp: projection budget must be >= 1");
    }
    const Matrix& atoms = dict.atoms();
    const Eigen::Index n = f.size();

    Vector residual = f;
    double norm = residual.norm();
    CoefficientBook book(dict.size());
    Matrix selected_atoms(n, 0);
    Matrix gram(0, 0);
    Decomposition1D out;
    bool stalled = false;

    while (norm >= options.rho && !stalled) {
        if (out.iterations >= options.cap) {
            break;
        }
        // Plain MP selections over the whole dictionary.
        for (int t = 0; t < options.p && out.iterations < options.cap && norm >= options.rho; ++t) {
            const Vector g = atoms.transpose() * residual;
            const Eigen::Index l = argmax_abs(g);
            const double a = g(l);
            if (a == 0.0) {
                stalled = true;
                break;
            }
            residual.noalias() -= a * atoms.col(l);
            book.add(l, a);
            const double before = norm;
            norm = residual.norm();
            ++out.iterations;
            if (observer) {
                observer({out.iterations, l, a, before, norm});
            }
        }

        // Grow the Gram matrix of S with the newly selected atoms.
        const Eigen::Index old_k = selected_atoms.cols();
        const Eigen::Index k = static_cast<Eigen::Index>(book.indices().size());
        if (k > old_k) {
            selected_atoms.conservativeResize(n, k);
            for (Eigen::Index j = old_k; j < k; ++j) {
                selected_atoms.col(j) = atoms.col(book.indices()[static_cast<std::size_t>(j)]);
            }
            Matrix grown(k, k);
            grown.topLeftCorner(old_k, old_k) = gram;
            grown.rightCols(k - old_k) = selected_atoms.transpose() * selected_atoms.rightCols(k - old_k);
            grown.bottomLeftCorner(k - old_k, old_k) = grown.topRightCorner(old_k, k - old_k).transpose();
            gram = std::move(grown);
        }

        // MP restricted to S until every correlation is within eps. The
        // correlations are tracked through the Gram matrix and then checked
        // against the explicit residual. When the round budget runs out
        // (nearly collinear atoms in S), least squares on S completes the
        // projection.
        Vector gs = selected_atoms.transpose() * residual;
        const std::int64_t budget = options.projection_budget * k;
        std::int64_t used = 0;
        int solves = 0;
        while (gs.cwiseAbs().maxCoeff() > options.eps) {
            Vector delta = Vector::Zero(k);
            if (used < budget && out.projection_steps < options.projection_cap) {
                while (used < budget && out.projection_steps < options.projection_cap) {
                    const Eigen::Index q = argmax_abs(gs);
                    const double a = gs(q);
                    if (std::abs(a) <= options.eps) {
                        break;
                    }
                    delta(q) += a;
                    gs.noalias() -= a * gram.col(q);
                    ++used;
                    ++out.projection_steps;
                }
            } else if (solves < kMaxDirectSolves) {
                delta = selected_atoms.colPivHouseholderQr().solve(residual);
                ++solves;
                ++out.direct_projections;
            } else {
                stalled = true;
                break;
            }
            residual.noalias() -= selected_atoms * delta;
            for (Eigen::Index j = 0; j < k; ++j) {
                book.coefficients()[static_cast<std::size_t>(j)] += delta(j);
            }
            gs = selected_atoms.transpose() * residual;
        }
        norm = residual.norm();
    }

    out.indices = std::move(book.indices());
    out.coefficients = std::move(book.coefficients());
    out.residual_norm = norm;
    out.converged = norm < options.rho;
    return out;
}

Vector reconstruct1d(const Decomposition1D& dec, const Dictionary1D& dict) {
    if (dec.indices.size() != dec.coefficients.size()) {
        throw std::invalid_argument("reconstruct1d: index/coefficient count mismatch");
    }
    Vector out = Vector::Zero(dict.length());
    for (std::size_t n = 0; n < dec.indices.size(); ++n) {
        const Eigen::Index l = dec.indices[n];
        if (l < 0 || l >= dict.size()) {
            throw std::invalid_argument("reconstruct1d: atom index out of range");
        }
        out.noalias() += dec.coefficients[n] * dict.atom(l);
    }
    return out;
}

}  // namespace sparsimg
