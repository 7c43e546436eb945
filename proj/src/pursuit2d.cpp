#include "sparsimg/pursuit2d.hpp"

#include "sparsimg/pursuit1d.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsimg {

namespace {

constexpr int kMaxDirectSolves = 3;

void check_inputs(const Matrix& image, const Dictionary1D& dx, const Dictionary1D& dy, double rho, int cap) {
    if (image.rows() != dx.length() || image.cols() != dy.length()) {
        throw std::invalid_argument("pursuit2d: image dimensions do not match dictionary atom lengths");
    }
    if (!(rho > 0.0)) {
        throw std::invalid_argument("pursuit2d: rho must be > 0");
    }
    if (cap < 1) {
        throw std::invalid_argument("pursuit2d: cap must be >= 1");
    }
}

Matrix correlations(const Matrix& residual, const Dictionary1D& dx, const Dictionary1D& dy) {
    const Matrix left = dx.atoms().transpose() * residual;
    return left * dy.atoms();
}

// Lexicographic argmax of |g(n, m)| skipping excluded entries (row-major mask).
PairSelection argmax_pair(const Matrix& g, const std::vector<char>* excluded = nullptr) {
    PairSelection best;
    double best_abs = -1.0;
    const Eigen::Index my = g.cols();
    for (Eigen::Index n = 0; n < g.rows(); ++n) {
        for (Eigen::Index m = 0; m < my; ++m) {
            if (excluded && (*excluded)[static_cast<std::size_t>(n * my + m)]) {
                continue;
            }
            const double v = std::abs(g(n, m));
            if (v > best_abs) {
                best_abs = v;
                best = {{static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m)}, g(n, m)};
            }
        }
    }
    return best;
}

class PairBook {
public:
    explicit PairBook(Eigen::Index my, Eigen::Index mx) : my_(my), slot_(static_cast<std::size_t>(mx * my), -1) {}

    std::size_t add(AtomPair pair, double amount) {
        auto& slot = slot_[static_cast<std::size_t>(pair.x * my_ + pair.y)];
        if (slot < 0) {
            slot = static_cast<std::ptrdiff_t>(pairs.size());
            pairs.push_back(pair);
            coefficients.push_back(0.0);
        }
        coefficients[static_cast<std::size_t>(slot)] += amount;
        return static_cast<std::size_t>(slot);
    }

    std::vector<AtomPair> pairs;
    std::vector<double> coefficients;

private:
    Eigen::Index my_;
    std::vector<std::ptrdiff_t> slot_;
};

}  // namespace

double frobenius_ip(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("frobenius_ip: dimension mismatch");
    }
    return a.cwiseProduct(b).sum();
}

PairSelection select_atom_pair(const Matrix& residual, const Dictionary1D& dx, const Dictionary1D& dy) {
    if (residual.rows() != dx.length() || residual.cols() != dy.length()) {
        throw std::invalid_argument("select_atom_pair: residual dimensions do not match dictionaries");
    }
    return argmax_pair(correlations(residual, dx, dy));
}

bool BiorthogonalState::append(AtomPair pair, const Vector& dx_atom, const Vector& dy_atom) {
    const Matrix a = dx_atom * dy_atom.transpose();
    const double a_norm = a.norm();
    const std::size_t k = pairs_.size();

    // C_{k+1} = A_{k+1} - sum_n C_n <C_n, A_{k+1}> / |C_n|^2, then one
    // re-orthogonalization pass, and a second one on heavy cancellation.
    Matrix c = a;
    for (std::size_t n = 0; n < k; ++n) {
        c.noalias() -= orthogonal_[n] * (dx_atom.dot(orthogonal_[n] * dy_atom) / norm2_[n]);
    }
    const int passes = c.norm() < 1e-6 * a_norm ? 2 : 1;
    for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t n = 0; n < k; ++n) {
            c.noalias() -= orthogonal_[n] * (frobenius_ip(orthogonal_[n], c) / norm2_[n]);
        }
    }
    const double c_norm2 = c.squaredNorm();
    if (std::sqrt(c_norm2) < 1e-10 * a_norm) {
        return false;
    }

    // B_{k+1}^{k+1} = C_{k+1} / |C_{k+1}|^2;  B_n^{k+1} = B_n^k - B_{k+1}^{k+1} <A_{k+1}, B_n^k>.
    Matrix b_new = c / c_norm2;
    for (std::size_t n = 0; n < k; ++n) {
        const double overlap = dx_atom.dot(reciprocal_[n] * dy_atom);
        reciprocal_[n].noalias() -= overlap * b_new;
    }
    pairs_.push_back(pair);
    atoms_x_.push_back(dx_atom);
    atoms_y_.push_back(dy_atom);
    reciprocal_.push_back(std::move(b_new));
    orthogonal_.push_back(std::move(c));
    norm2_.push_back(c_norm2);
    return true;
}

std::vector<double> BiorthogonalState::coefficients(const Matrix& image) const {
    std::vector<double> out(reciprocal_.size());
    for (std::size_t n = 0; n < reciprocal_.size(); ++n) {
        out[n] = frobenius_ip(reciprocal_[n], image);
    }
    return out;
}

Decomposition2D mp2d(const Matrix& image, const Dictionary1D& dx, const Dictionary1D& dy, double rho, int cap,
                     const StepObserver2D& observer) {
    check_inputs(image, dx, dy, rho, cap);
    Matrix residual = image;
    double norm = residual.norm();
    PairBook book(dy.size(), dx.size());
    Decomposition2D out;

    while (norm >= rho && out.iterations < cap) {
        const PairSelection sel = argmax_pair(correlations(residual, dx, dy));
        if (sel.value == 0.0) {
            break;
        }
        residual.noalias() -= sel.value * dx.atom(sel.pair.x) * dy.atom(sel.pair.y).transpose();
        book.add(sel.pair, sel.value);
        const double before = norm;
        norm = residual.norm();
        ++out.iterations;
        if (observer) {
            observer({out.iterations, sel.pair, sel.value, before, norm});
        }
    }
    out.pairs = std::move(book.pairs);
    out.coefficients = std::move(book.coefficients);
    out.residual_norm = norm;
    out.converged = norm < rho;
    return out;
}

Decomposition2D omp2d(const Matrix& image, const Dictionary1D& dx, const Dictionary1D& dy, double rho, int cap,
                      const StateObserver& observer) {
    check_inputs(image, dx, dy, rho, cap);
    if (cap > image.rows() * image.cols()) {
        throw std::invalid_argument("omp2d: cap must not exceed Nx*Ny");
    }
    const Eigen::Index my = dy.size();
    std::vector<char> excluded(static_cast<std::size_t>(dx.size() * my), 0);
    BiorthogonalState state;
    Matrix residual = image;
    double norm = residual.norm();
    Decomposition2D out;

    while (norm >= rho && static_cast<int>(state.size()) < cap) {
        const Matrix g = correlations(residual, dx, dy);
        bool added = false;
        while (true) {
            const PairSelection sel = argmax_pair(g, &excluded);
            if (sel.value == 0.0) {
                break;
            }
            excluded[static_cast<std::size_t>(sel.pair.x * my + sel.pair.y)] = 1;
            if (state.append(sel.pair, dx.atom(sel.pair.x), dy.atom(sel.pair.y))) {
                added = true;
                break;
            }
        }
        if (!added) {
            break;
        }
        // R^{k+1} = R^k - C_{k+1} <C_{k+1}, R^k> / |C_{k+1}|^2
        const std::size_t k = state.size() - 1;
        residual.noalias() -= state.orthogonal(k) * (frobenius_ip(state.orthogonal(k), residual) / state.orthogonal_norm2(k));
        norm = residual.norm();
        ++out.iterations;
        if (observer) {
            observer(state);
        }
    }
    out.pairs = state.pairs();
    out.coefficients = state.coefficients(image);
    out.residual_norm = norm;
    out.converged = norm < rho;
    return out;
}

Decomposition2D spmp2d(const Matrix& image, const Dictionary1D& dx, const Dictionary1D& dy,
                       const Spmp2dOptions& options, const StepObserver2D& observer,
                       const ProjectionObserver& on_projection) {
    check_inputs(image, dx, dy, options.rho, options.cap);
    if (options.p < 1) {
        throw std::invalid_argument("spmp2d: p must be >= 1");
    }
    if (!(options.eps > 0.0)) {
        throw std::invalid_argument("spmp2d: eps must be > 0");
    }
    if (options.projection_budget < 1) {
        throw std::invalid_argument("spmp2d: projection budget must be >= 1");
    }
    // 1D Gram matrices give every inner product between rank-1 atoms:
    // <A_n, A_q>_F = Gx(xn, xq) * Gy(yn, yq).
    const Matrix gx = dx.atoms().transpose() * dx.atoms();
    const Matrix gy = dy.atoms().transpose() * dy.atoms();

    Matrix residual = image;
    double norm = residual.norm();
    PairBook book(dy.size(), dx.size());
    Decomposition2D out;
    bool stalled = false;

    auto restricted_correlations = [&](Vector& g) {
        const Eigen::Index k = static_cast<Eigen::Index>(book.pairs.size());
        g.resize(k);
        for (Eigen::Index n = 0; n < k; ++n) {
            const AtomPair pr = book.pairs[static_cast<std::size_t>(n)];
            g(n) = dx.atom(pr.x).dot(residual * dy.atom(pr.y));
        }
    };

    while (norm > options.rho && !stalled && out.iterations < options.cap) {
        // p plain MP iterations, accumulating repeated pairs.
        for (int t = 0; t < options.p && out.iterations < options.cap && norm > options.rho; ++t) {
            const PairSelection sel = argmax_pair(correlations(residual, dx, dy));
            if (sel.value == 0.0) {
                stalled = true;
                break;
            }
            residual.noalias() -= sel.value * dx.atom(sel.pair.x) * dy.atom(sel.pair.y).transpose();
            book.add(sel.pair, sel.value);
            const double before = norm;
            norm = residual.norm();
            ++out.iterations;
            if (observer) {
                observer({out.iterations, sel.pair, sel.value, before, norm});
            }
        }

        // Projection onto span of the selected pairs via MP restricted to
        // them, completed by least squares when the round budget runs out.
        const Eigen::Index k = static_cast<Eigen::Index>(book.pairs.size());
        Vector g;
        restricted_correlations(g);
        const std::int64_t budget = options.projection_budget * k;
        std::int64_t used = 0;
        int solves = 0;
        while (k > 0 && g.cwiseAbs().maxCoeff() > options.eps) {
            Vector delta = Vector::Zero(k);
            if (used < budget && out.projection_steps < options.projection_cap) {
                while (used < budget && out.projection_steps < options.projection_cap) {
                    const Eigen::Index q = argmax_abs(g);
                    const double a = g(q);
                    if (std::abs(a) <= options.eps) {
                        break;
                    }
                    delta(q) += a;
                    const AtomPair pq = book.pairs[static_cast<std::size_t>(q)];
                    for (Eigen::Index n = 0; n < k; ++n) {
                        const AtomPair pn = book.pairs[static_cast<std::size_t>(n)];
                        g(n) -= a * gx(pn.x, pq.x) * gy(pn.y, pq.y);
                    }
                    ++used;
                    ++out.projection_steps;
                }
            } else if (solves < kMaxDirectSolves) {
                Matrix columns(residual.size(), k);
                for (Eigen::Index n = 0; n < k; ++n) {
                    const AtomPair pn = book.pairs[static_cast<std::size_t>(n)];
                    const Matrix atom = dx.atom(pn.x) * dy.atom(pn.y).transpose();
                    columns.col(n) = atom.reshaped();
                }
                delta = columns.colPivHouseholderQr().solve(residual.reshaped());
                ++solves;
                ++out.direct_projections;
            } else {
                stalled = true;
                break;
            }
            for (Eigen::Index n = 0; n < k; ++n) {
                if (delta(n) != 0.0) {
                    const AtomPair pn = book.pairs[static_cast<std::size_t>(n)];
                    residual.noalias() -= delta(n) * dx.atom(pn.x) * dy.atom(pn.y).transpose();
                    book.coefficients[static_cast<std::size_t>(n)] += delta(n);
                }
            }
            restricted_correlations(g);
        }
        norm = residual.norm();
        if (on_projection) {
            on_projection(book.pairs, residual);
        }
    }
    out.pairs = std::move(book.pairs);
    out.coefficients = std::move(book.coefficients);
    out.residual_norm = norm;
    out.converged = norm <= options.rho;
    return out;
}

Matrix reconstruct2d(const std::vector<AtomPair>& pairs, const std::vector<double>& coefficients,
                     const Dictionary1D& dx, const Dictionary1D& dy) {
    if (pairs.size() != coefficients.size()) {
        throw std::invalid_argument("reconstruct2d: pair/coefficient count mismatch");
    }
    Matrix out = Matrix::Zero(dx.length(), dy.length());
    for (std::size_t n = 0; n < pairs.size(); ++n) {
        if (pairs[n].x >= dx.size() || pairs[n].y >= dy.size()) {
            throw std::invalid_argument("reconstruct2d: atom index out of range");
        }
        out.noalias() += coefficients[n] * dx.atom(pairs[n].x) * dy.atom(pairs[n].y).transpose();
    }
    return out;
}

Matrix reconstruct2d(const Decomposition2D& dec, const Dictionary1D& dx, const Dictionary1D& dy) {
    return reconstruct2d(dec.pairs, dec.coefficients, dx, dy);
}

}  // namespace sparsimg
