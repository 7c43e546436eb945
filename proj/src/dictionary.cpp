#include "sparsimg/dictionary.hpp"

#include "sparsimg/random.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace sparsimg {

namespace {

// Polynomial pieces of the cardinal B-splines in t = x / l, ascending powers.
// Piece k covers t in [k, k+1).
using Poly = std::vector<double>;

const std::vector<Poly>& hat_pieces() {
    static const std::vector<Poly> pieces = {
        {0.0, 1.0},
        {2.0, -1.0},
    };
    return pieces;
}

const std::vector<Poly>& cubic_pieces() {
    static const std::vector<Poly> pieces = {
        {0.0, 0.0, 0.0, 1.0 / 6.0},
        {2.0 / 3.0, -2.0, 2.0, -0.5},
        {-22.0 / 3.0, 10.0, -4.0, 0.5},
        {32.0 / 3.0, -8.0, 2.0, -1.0 / 6.0},
    };
    return pieces;
}

Poly differentiate(const Poly& p) {
    if (p.size() <= 1) {
        return {0.0};
    }
    Poly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) {
        d[k - 1] = static_cast<double>(k) * p[k];
    }
    return d;
}

double horner(const Poly& p, double t) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

Dictionary1D append_translates(Dictionary1D dict, const Prototype& proto, int n, const std::string& label) {
    return dict.joined(build_translates(proto, n, label));
}

}  // namespace

std::string_view to_string(PrototypeFamily family) {
    switch (family) {
        case PrototypeFamily::B2: return "B2";
        case PrototypeFamily::B4: return "B4";
        case PrototypeFamily::dB2: return "dB2";
        case PrototypeFamily::dB4: return "dB4";
        case PrototypeFamily::d2B4: return "d2B4";
        case PrototypeFamily::Haar: return "Haar";
        case PrototypeFamily::MexHat: return "MexHat";
        case PrototypeFamily::Random: return "Random";
    }
    return "?";
}

int Prototype::nonzero_width() const {
    const auto first = std::find_if(samples.begin(), samples.end(), [](double v) { return v != 0.0; });
    if (first == samples.end()) {
        return 0;
    }
    const auto last = std::find_if(samples.rbegin(), samples.rend(), [](double v) { return v != 0.0; });
    return static_cast<int>(std::distance(first, last.base()));
}

Prototype sample_prototype(PrototypeFamily family, int order, int scale) {
    int derivative = 0;
    switch (family) {
        case PrototypeFamily::B2:
        case PrototypeFamily::B4: derivative = 0; break;
        case PrototypeFamily::dB2:
        case PrototypeFamily::dB4: derivative = 1; break;
        case PrototypeFamily::d2B4: derivative = 2; break;
        default:
            throw std::invalid_argument("sample_prototype: not a spline family");
    }
    const bool hat_family = family == PrototypeFamily::B2 || family == PrototypeFamily::dB2;
    if ((hat_family && order != 2) || (!hat_family && order != 4)) {
        throw std::invalid_argument("sample_prototype: unsupported family/order pair");
    }
    if (scale < 1) {
        throw std::invalid_argument("sample_prototype: scale must be >= 1");
    }

    std::vector<Poly> pieces = order == 2 ? hat_pieces() : cubic_pieces();
    for (auto& piece : pieces) {
        for (int d = 0; d < derivative; ++d) {
            piece = differentiate(piece);
        }
    }
    const double chain = std::pow(static_cast<double>(scale), -derivative);

    const int last_knot = order * scale;
    Prototype proto{family, order, scale, std::vector<double>(static_cast<std::size_t>(last_knot) + 1)};
    for (int k = 0; k <= last_knot; ++k) {
        const double t = static_cast<double>(k) / scale;
        const bool on_piece_boundary = k % scale == 0;
        const int right = k / scale;                        // piece to the right of x = k
        const int left = on_piece_boundary ? right - 1 : right;  // piece to the left
        double value;
        if (k == 0) {
            value = horner(pieces[0], t);
        } else if (k == last_knot) {
            value = horner(pieces[static_cast<std::size_t>(order - 1)], t);
        } else if (left == right) {
            value = horner(pieces[static_cast<std::size_t>(right)], t);
        } else {
            value = 0.5 * (horner(pieces[static_cast<std::size_t>(left)], t)
                           + horner(pieces[static_cast<std::size_t>(right)], t));
        }
        proto.samples[static_cast<std::size_t>(k)] = chain * value;
    }
    return proto;
}

Prototype haar_prototype(int support) {
    if (support < 2 || support % 2 != 0) {
        throw std::invalid_argument("haar_prototype: support must be even and >= 2");
    }
    Prototype proto{PrototypeFamily::Haar, 0, support / 2, std::vector<double>(static_cast<std::size_t>(support))};
    for (int k = 0; k < support; ++k) {
        proto.samples[static_cast<std::size_t>(k)] = k < support / 2 ? 1.0 : -1.0;
    }
    return proto;
}

Prototype mexican_hat_prototype(int support) {
    if (support < 3 || support % 2 == 0) {
        throw std::invalid_argument("mexican_hat_prototype: support must be odd and >= 3");
    }
    const int half = support / 2;
    const double sigma = (support + 1) / 9.0;
    Prototype proto{PrototypeFamily::MexHat, 0, half, std::vector<double>(static_cast<std::size_t>(support))};
    double mean = 0.0;
    for (int k = 0; k < support; ++k) {
        const double x = static_cast<double>(k - half);
        const double r2 = (x * x) / (sigma * sigma);
        const double g = (1.0 - r2) * std::exp(-0.5 * r2);
        proto.samples[static_cast<std::size_t>(k)] = g;
        mean += g;
    }
    mean /= support;
    for (auto& v : proto.samples) {
        v -= mean;
    }
    return proto;
}

Dictionary1D::Dictionary1D(Matrix atoms, std::vector<std::string> labels)
    : atoms_(std::move(atoms)), labels_(std::move(labels)) {
    if (static_cast<Eigen::Index>(labels_.size()) != atoms_.cols()) {
        throw std::invalid_argument("Dictionary1D: label count does not match atom count");
    }
    for (Eigen::Index i = 0; i < atoms_.cols(); ++i) {
        if (std::abs(atoms_.col(i).norm() - 1.0) >= 1e-12) {
            throw std::invalid_argument("Dictionary1D: atom " + std::to_string(i) + " is not unit norm");
        }
    }
}

std::size_t Dictionary1D::count_label(std::string_view label) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

Dictionary1D Dictionary1D::joined(const Dictionary1D& other) const {
    if (size() == 0) {
        return other;
    }
    if (other.size() == 0) {
        return *this;
    }
    if (other.length() != length()) {
        throw std::invalid_argument("Dictionary1D::joined: atom length mismatch");
    }
    Matrix atoms(length(), size() + other.size());
    atoms << atoms_, other.atoms_;
    std::vector<std::string> labels = labels_;
    labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
    Dictionary1D out;
    out.atoms_ = std::move(atoms);
    out.labels_ = std::move(labels);
    return out;
}

std::string Dictionary1D::to_csv() const {
    std::string out;
    char buf[32];
    for (Eigen::Index i = 0; i < size(); ++i) {
        for (Eigen::Index j = 0; j < length(); ++j) {
            if (j > 0) {
                out += ',';
            }
            std::snprintf(buf, sizeof buf, "%.17g", atoms_(j, i));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

Dictionary1D build_rdc(int n, int m) {
    if (n < 1) {
        throw std::invalid_argument("build_rdc: N must be >= 1");
    }
    if (m < n) {
        throw std::invalid_argument("build_rdc: M must be >= N");
    }
    Matrix atoms(n, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            // 1-based formula: cos(pi (2j - 1)(i - 1) / 2M)
            atoms(j, i) = std::cos(std::numbers::pi * (2.0 * (j + 1) - 1.0) * i / (2.0 * m));
        }
        atoms.col(i) /= atoms.col(i).norm();
    }
    return Dictionary1D(std::move(atoms), std::vector<std::string>(static_cast<std::size_t>(m), m == n ? "DC" : "1"));
}

Dictionary1D build_euclidean(int n, std::string label) {
    if (n < 1) {
        throw std::invalid_argument("build_euclidean: N must be >= 1");
    }
    return Dictionary1D(Matrix::Identity(n, n), std::vector<std::string>(static_cast<std::size_t>(n), std::move(label)));
}

Dictionary1D build_translates(const Prototype& prototype, int n, const std::string& label) {
    if (n < 1) {
        throw std::invalid_argument("build_translates: N must be >= 1");
    }
    const int len = static_cast<int>(prototype.samples.size());
    if (len == 0 || prototype.nonzero_width() == 0) {
        throw std::invalid_argument("build_translates: prototype has no nonzero sample");
    }
    std::vector<Vector> kept;
    for (int shift = -(len - 1); shift <= n - 1; ++shift) {
        Vector v = Vector::Zero(n);
        const int lo = std::max(0, shift);
        const int hi = std::min(n - 1, shift + len - 1);
        for (int j = lo; j <= hi; ++j) {
            v(j) = prototype.samples[static_cast<std::size_t>(j - shift)];
        }
        const double norm = v.norm();
        if (norm == 0.0) {
            continue;
        }
        kept.push_back(v / norm);
    }
    Matrix atoms(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        atoms.col(static_cast<Eigen::Index>(i)) = kept[i];
    }
    return Dictionary1D(std::move(atoms), std::vector<std::string>(kept.size(), label));
}

Prototype rdbs_prototype(int s) {
    switch (s) {
        case 2: return sample_prototype(PrototypeFamily::B2, 2, 1);
        case 3: return sample_prototype(PrototypeFamily::B2, 2, 2);
        case 4: return sample_prototype(PrototypeFamily::B2, 2, 3);
        case 5: return sample_prototype(PrototypeFamily::dB2, 2, 2);
        case 6: return sample_prototype(PrototypeFamily::dB2, 2, 3);
        case 7: return sample_prototype(PrototypeFamily::B4, 4, 2);
        case 8: return sample_prototype(PrototypeFamily::dB4, 4, 2);
        case 9: return sample_prototype(PrototypeFamily::d2B4, 4, 2);
        default:
            throw std::invalid_argument("rdbs_prototype: s must be in 2..9");
    }
}

Dictionary1D build_rdbs_subdict(int s, int n) {
    const Prototype proto = rdbs_prototype(s);
    if (n < proto.nonzero_width()) {
        throw std::invalid_argument("build_rdbs_subdict: N smaller than prototype support");
    }
    return build_translates(proto, n, std::to_string(s));
}

Dictionary1D build_mixed(int n) {
    if (n < 8) {
        throw std::invalid_argument("build_mixed: N must be >= 8");
    }
    return build_for_spec(DictSpec{DictSpec::Kind::Mixed, 0}, n);
}

Dictionary1D build_rdw(int n) {
    if (n < 8) {
        throw std::invalid_argument("build_rdw: N must be >= 8");
    }
    return build_for_spec(DictSpec{DictSpec::Kind::Rdw, 0}, n);
}

Dictionary1D build_rr(int n, std::uint64_t seed) {
    if (n < 8) {
        throw std::invalid_argument("build_rr: N must be >= 8");
    }
    return build_for_spec(DictSpec{DictSpec::Kind::Rr, seed}, n);
}

DictSpec DictSpec::parse(std::string_view text) {
    if (text == "mixed") return {Kind::Mixed, 0};
    if (text == "rdc") return {Kind::Rdc, 0};
    if (text == "rdw") return {Kind::Rdw, 0};
    if (text == "dct") return {Kind::Dct, 0};
    if (text.starts_with("rr:")) {
        const std::string_view digits = text.substr(3);
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
        if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
            throw std::invalid_argument("dictionary spec: bad seed in '" + std::string(text) + "'");
        }
        return {Kind::Rr, seed};
    }
    throw std::invalid_argument("dictionary spec: unknown '" + std::string(text) + "'");
}

std::string DictSpec::str() const {
    switch (kind) {
        case Kind::Mixed: return "mixed";
        case Kind::Rdc: return "rdc";
        case Kind::Rdw: return "rdw";
        case Kind::Dct: return "dct";
        case Kind::Rr: return "rr:" + std::to_string(seed);
    }
    return "?";
}

Dictionary1D build_for_spec(const DictSpec& spec, int n) {
    if (n < 1) {
        throw std::invalid_argument("build_for_spec: N must be >= 1");
    }
    switch (spec.kind) {
        case DictSpec::Kind::Dct:
            return build_rdc(n, n);
        case DictSpec::Kind::Rdc:
            return build_rdc(n, 2 * n);
        case DictSpec::Kind::Mixed: {
            Dictionary1D dict = build_rdc(n, 2 * n);
            for (int s = 2; s <= 9; ++s) {
                const Prototype proto = rdbs_prototype(s);
                if (proto.nonzero_width() <= n) {
                    dict = append_translates(std::move(dict), proto, n, std::to_string(s));
                }
            }
            return dict;
        }
        case DictSpec::Kind::Rdw: {
            Dictionary1D dict = build_rdc(n, 2 * n).joined(build_euclidean(n));
            int k = 1;
            for (int support : {2, 4, 6, 8}) {
                dict = append_translates(std::move(dict), haar_prototype(support), n, "RDW-" + std::to_string(k++));
            }
            for (int support : {3, 5, 7}) {
                dict = append_translates(std::move(dict), mexican_hat_prototype(support), n, "RDW-" + std::to_string(k++));
            }
            return dict;
        }
        case DictSpec::Kind::Rr: {
            Rng rng(spec.seed);
            std::vector<Prototype> protos;
            for (int s = 2; s <= 9; ++s) {
                const std::size_t len = rdbs_prototype(s).samples.size();
                Prototype proto{PrototypeFamily::Random, 0, s, std::vector<double>(len)};
                for (auto& v : proto.samples) {
                    v = rng.normal();
                }
                protos.push_back(std::move(proto));
            }
            Dictionary1D dict = build_rdc(n, 2 * n).joined(build_euclidean(n));
            for (const auto& proto : protos) {
                dict = append_translates(std::move(dict), proto, n, "RR-" + std::to_string(proto.scale));
            }
            return dict;
        }
    }
    throw std::invalid_argument("build_for_spec: unknown kind");
}

}  // namespace sparsimg
