#include "sparsimg/decomposition.hpp"

#include "sparsimg/image.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace sparsimg {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'D', '1'};

class Writer {
public:
    template <typename T>
    void put(T value) {
        static_assert(std::is_integral_v<T>);
        using U = std::make_unsigned_t<T>;
        auto u = static_cast<U>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            bytes_.push_back(static_cast<std::uint8_t>(u & 0xFFu));
            u = static_cast<U>(u >> 8);
        }
    }

    void put_f64(double value) { put(std::bit_cast<std::uint64_t>(value)); }

    void put_bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }

    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
    T get(const char* what) {
        static_assert(std::is_integral_v<T>);
        require(sizeof(T), what);
        std::make_unsigned_t<T> u = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            u = static_cast<decltype(u)>(u | (static_cast<decltype(u)>(bytes_[pos_ + i]) << (8 * i)));
        }
        pos_ += sizeof(T);
        return static_cast<T>(u);
    }

    double get_f64(const char* what) { return std::bit_cast<double>(get<std::uint64_t>(what)); }

    std::span<const std::uint8_t> get_bytes(std::size_t n, const char* what) {
        require(n, what);
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    std::size_t pos() const noexcept { return pos_; }

private:
    void require(std::size_t n, const char* what) {
        if (bytes_.size() - pos_ < n) {
            throw FormatError(std::string("truncated payload reading ") + what, pos_);
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

template <typename T>
T checked_narrow(std::size_t value, const char* what) {
    if (value > std::numeric_limits<T>::max()) {
        throw std::invalid_argument(std::string("serialize: ") + what + " out of range");
    }
    return static_cast<T>(value);
}

}  // namespace

std::vector<std::uint8_t> serialize(const BlockDecomposition& dec) {
    if (dec.blocks.size() != dec.grid.blocks.size()) {
        throw std::invalid_argument("serialize: block list does not match grid");
    }
    Writer w;
    w.put_bytes(kMagic, 4);
    w.put<std::uint16_t>(kFormatVersion);
    w.put<std::uint16_t>(0);  // flags
    w.put<std::uint32_t>(checked_narrow<std::uint32_t>(static_cast<std::size_t>(dec.grid.nx), "Nx"));
    w.put<std::uint32_t>(checked_narrow<std::uint32_t>(static_cast<std::size_t>(dec.grid.ny), "Ny"));
    w.put<std::uint16_t>(checked_narrow<std::uint16_t>(static_cast<std::size_t>(dec.grid.side), "block side"));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(dec.method));
    w.put<std::uint16_t>(checked_narrow<std::uint16_t>(dec.dict_spec.size(), "dictionary spec length"));
    w.put_bytes(dec.dict_spec.data(), dec.dict_spec.size());
    w.put_f64(dec.target_db);
    w.put<std::uint32_t>(checked_narrow<std::uint32_t>(dec.blocks.size(), "block count"));
    for (const BlockCode& block : dec.blocks) {
        if (block.pairs.size() != block.coefficients.size()) {
            throw std::invalid_argument("serialize: pair/coefficient count mismatch");
        }
        w.put<std::uint32_t>(checked_narrow<std::uint32_t>(block.pairs.size(), "atom count"));
        for (std::size_t n = 0; n < block.pairs.size(); ++n) {
            w.put<std::uint32_t>(block.pairs[n].x);
            w.put<std::uint32_t>(block.pairs[n].y);
            w.put_f64(block.coefficients[n]);
        }
    }
    const std::uint32_t crc = crc32_of(w.bytes());
    w.put<std::uint32_t>(crc);
    return std::move(w.bytes());
}

BlockDecomposition deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) {
        throw FormatError("truncated payload reading magic", 0);
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw FormatError("bad magic", 0);
    }
    // Integrity before parsing so corrupted counts never drive allocation.
    if (bytes.size() < 8) {
        throw FormatError("truncated payload reading header", bytes.size());
    }
    const std::size_t body = bytes.size() - 4;
    Reader crc_reader(bytes.subspan(body));
    const auto stored_crc = crc_reader.get<std::uint32_t>("checksum");
    if (crc32_of(bytes.first(body)) != stored_crc) {
        throw FormatError("checksum mismatch", body);
    }

    Reader r(bytes.first(body));
    r.get_bytes(4, "magic");
    const auto version = r.get<std::uint16_t>("version");
    if (version != kFormatVersion) {
        throw FormatError("unsupported version " + std::to_string(version), 4);
    }
    r.get<std::uint16_t>("flags");
    BlockDecomposition dec;
    const auto nx = r.get<std::uint32_t>("Nx");
    const auto ny = r.get<std::uint32_t>("Ny");
    const std::size_t side_offset = r.pos();
    const auto side = r.get<std::uint16_t>("block side");
    const std::size_t method_offset = r.pos();
    const auto method = r.get<std::uint8_t>("method");
    if (method < 1 || method > 4) {
        throw FormatError("unknown method id " + std::to_string(method), method_offset);
    }
    dec.method = static_cast<Method>(method);
    const auto spec_len = r.get<std::uint16_t>("dictionary spec length");
    const auto spec = r.get_bytes(spec_len, "dictionary spec");
    dec.dict_spec.assign(spec.begin(), spec.end());
    dec.target_db = r.get_f64("target PSNR");
    if (nx == 0 || ny == 0 || side == 0 || nx > std::numeric_limits<std::int32_t>::max()
        || ny > std::numeric_limits<std::int32_t>::max()) {
        throw FormatError("invalid image or block dimensions", side_offset);
    }
    const std::size_t count_offset = r.pos();
    const auto count = r.get<std::uint32_t>("block count");
    const std::uint64_t expected = ((std::uint64_t{nx} + side - 1) / side) * ((std::uint64_t{ny} + side - 1) / side);
    if (count != expected) {
        throw FormatError("block count does not match grid", count_offset);
    }
    if (std::uint64_t{count} * 4 > body - r.pos()) {
        throw FormatError("truncated payload reading block records", r.pos());
    }
    dec.grid = partition(static_cast<int>(nx), static_cast<int>(ny), side);
    dec.blocks.resize(count);
    for (auto& block : dec.blocks) {
        const std::size_t k_offset = r.pos();
        const auto k = r.get<std::uint32_t>("atom count");
        if (static_cast<std::size_t>(k) * 16 > body - r.pos()) {
            throw FormatError("truncated payload reading atom records", k_offset);
        }
        block.pairs.resize(k);
        block.coefficients.resize(k);
        for (std::uint32_t n = 0; n < k; ++n) {
            block.pairs[n].x = r.get<std::uint32_t>("row atom index");
            block.pairs[n].y = r.get<std::uint32_t>("column atom index");
            block.coefficients[n] = r.get_f64("coefficient");
        }
    }
    if (r.pos() != body) {
        throw FormatError("trailing bytes before checksum", r.pos());
    }
    return dec;
}

}  // namespace sparsimg
