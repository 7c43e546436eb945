#pragma once

#include "sparsimg/image.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sparsimg {

enum class PrototypeFamily {
    B2,      // linear B-spline (hat)
    B4,      // cubic B-spline
    dB2,     // first derivative of the hat
    dB4,     // first derivative of the cubic
    d2B4,    // second derivative of the cubic
    Haar,
    MexHat,
    Random,
};

std::string_view to_string(PrototypeFamily family);

// A discretized generating function. samples[k] is the value at knot k of the
// support [0, m*l] for spline families.
struct Prototype {
    PrototypeFamily family;
    int order = 0;   // spline order m (0 for non-spline families)
    int scale = 1;   // knot spacing multiplier l
    std::vector<double> samples;

    // Distance from first to last nonzero sample, inclusive.
    int nonzero_width() const;
};

// Evaluates a spline prototype at the integer knots 0..m*l. Derivative
// families take the mean of one-sided limits at interior kinks and the inner
// limit at the support endpoints.
Prototype sample_prototype(PrototypeFamily family, int order, int scale);

// Discrete Haar prototype of even support: +1 on the first half, -1 on the second.
Prototype haar_prototype(int support);

// Discrete Mexican hat of odd support, sigma = (support+1)/9 so the first
// excluded sample is below 1e-3, then mean-corrected to sum to zero.
Prototype mexican_hat_prototype(int support);

// Ordered set of unit-norm atoms of a common length N, stored as the columns
// of an N x M matrix, each with a sub-dictionary label.
class Dictionary1D {
public:
    Dictionary1D() = default;
    // Validates unit norms; throws std::invalid_argument otherwise.
    Dictionary1D(Matrix atoms, std::vector<std::string> labels);

    Eigen::Index length() const noexcept { return atoms_.rows(); }
    Eigen::Index size() const noexcept { return atoms_.cols(); }

    auto atom(Eigen::Index i) const { return atoms_.col(i); }
    const Matrix& atoms() const noexcept { return atoms_; }
    const std::string& label(Eigen::Index i) const { return labels_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    // Number of atoms carrying the given label.
    std::size_t count_label(std::string_view label) const;

    // Concatenation preserving order and labels.
    Dictionary1D joined(const Dictionary1D& other) const;

    // Debug dump: one atom per row, comma separated, %.17g.
    std::string to_csv() const;

    bool operator==(const Dictionary1D& other) const {
        return labels_ == other.labels_ && atoms_.rows() == other.atoms_.rows()
               && atoms_.cols() == other.atoms_.cols() && atoms_ == other.atoms_;
    }

private:
    Matrix atoms_;
    std::vector<std::string> labels_;
};

// Redundant discrete cosine dictionary: M cosine atoms of length N, label "1".
Dictionary1D build_rdc(int n, int m);

// Standard basis of R^N, label given.
Dictionary1D build_euclidean(int n, std::string label = "E");

// Translates the prototype one sample at a time; keeps every translate whose
// support meets [0, N), truncated and renormalized; drops zero truncations.
Dictionary1D build_translates(const Prototype& prototype, int n, const std::string& label);

// RDBS sub-dictionary s in 2..9.
Prototype rdbs_prototype(int s);
Dictionary1D build_rdbs_subdict(int s, int n);

// RDC(N, 2N) joined with the eight RDBS sub-dictionaries.
Dictionary1D build_mixed(int n);

// RDC(N, 2N), Euclidean basis, Haar (2,4,6,8) and Mexican hat (3,5,7) translates.
Dictionary1D build_rdw(int n);

// RDC(N, 2N), Euclidean basis, and Gaussian random prototypes with the RDBS supports.
Dictionary1D build_rr(int n, std::uint64_t seed);

// Parsed dictionary spec string: "mixed", "rdc", "rdw", "rr:<seed>", "dct".
struct DictSpec {
    enum class Kind { Mixed, Rdc, Rdw, Rr, Dct };
    Kind kind = Kind::Mixed;
    std::uint64_t seed = 0;

    static DictSpec parse(std::string_view text);
    std::string str() const;
};

// Dictionary for one block axis of length n. The mixed dictionary omits any
// RDBS sub-dictionary whose support exceeds n; RDW and RR use plain cut-off.
Dictionary1D build_for_spec(const DictSpec& spec, int n);

}  // namespace sparsimg
