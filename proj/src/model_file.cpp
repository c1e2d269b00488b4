#include "lrk/errors.hpp"
#include "lrk/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

namespace lrk {

namespace {

constexpr std::size_t kHeaderSize = 4 + 3 * 4;
constexpr std::size_t kChecksumSize = 4;

void put_u32(Bytes& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void put_f64(Bytes& out, double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int shift = 0; shift < 64; shift += 8) {
        out.push_back(static_cast<std::uint8_t>(bits >> shift));
    }
}

std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | p[i];
    }
    return v;
}

double get_f64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | p[i];
    }
    return std::bit_cast<double>(v);
}

std::uint32_t crc32_of(ByteView bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes a uInt length; feed large buffers in pieces.
    constexpr std::size_t kChunk = 1u << 30;
    for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
        const std::size_t len = std::min(kChunk, bytes.size() - off);
        crc = crc32(crc, bytes.data() + off, static_cast<uInt>(len));
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t narrow(std::size_t v, const char* what) {
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw DimensionError(std::string("save_model: ") + what + " does not fit in 32 bits");
    }
    return static_cast<std::uint32_t>(v);
}

} // namespace

std::uint64_t model_file_size(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
    return kHeaderSize + 8 * k * (m + n + 1) + kChecksumSize;
}

Bytes save_model(const TruncatedModel& t) {
    const std::size_t m = t.rows();
    const std::size_t n = t.cols();
    const std::size_t k = t.rank();

    Bytes out;
    out.reserve(model_file_size(m, n, k));
    out.insert(out.end(), kModelMagic.begin(), kModelMagic.end());
    put_u32(out, narrow(m, "m"));
    put_u32(out, narrow(n, "n"));
    put_u32(out, narrow(k, "k"));
    for (std::size_t j = 0; j < k; ++j) {
        put_f64(out, t.sigma()[j]);
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            put_f64(out, t.u_cols()(i, j));
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            put_f64(out, t.v_cols()(i, j));
        }
    }
    put_u32(out, crc32_of(out));
    return out;
}

TruncatedModel load_model(ByteView bytes) {
    using Kind = IntegrityError::Kind;
    if (bytes.size() < kModelMagic.size() ||
        !std::equal(kModelMagic.begin(), kModelMagic.end(), bytes.begin())) {
        throw IntegrityError(Kind::bad_magic, "model: missing LRK1 magic");
    }
    if (bytes.size() < kHeaderSize + kChecksumSize) {
        throw IntegrityError(Kind::length_mismatch, "model: file shorter than its header");
    }
    const std::uint64_t m = get_u32(bytes.data() + 4);
    const std::uint64_t n = get_u32(bytes.data() + 8);
    const std::uint64_t k = get_u32(bytes.data() + 12);
    // 8 k (m + n + 1) stays below 2^64 whenever it could match a real file.
    const bool oversized = k != 0 && (m + n + 1) > (std::uint64_t{1} << 60) / k;
    const std::uint64_t expected = oversized ? 0 : model_file_size(m, n, k);
    if (oversized || expected != bytes.size()) {
        throw IntegrityError(Kind::length_mismatch,
                             "model: header m=" + std::to_string(m) + " n=" + std::to_string(n) +
                                 " k=" + std::to_string(k) + " does not match file length " +
                                 std::to_string(bytes.size()));
    }
    const std::size_t body = bytes.size() - kChecksumSize;
    if (crc32_of(bytes.first(body)) != get_u32(bytes.data() + body)) {
        throw IntegrityError(Kind::bad_checksum, "model: CRC-32 mismatch");
    }

    const std::uint8_t* p = bytes.data() + kHeaderSize;
    try {
        std::vector<double> sigma(k);
        for (auto& s : sigma) {
            s = get_f64(p);
            p += 8;
        }
        std::vector<double> u(m * k);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < m; ++i, p += 8) {
                u[i * k + j] = get_f64(p);
            }
        }
        std::vector<double> v(n * k);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < n; ++i, p += 8) {
                v[i * k + j] = get_f64(p);
            }
        }
        return TruncatedModel(m, n, Vector(std::move(sigma)), Matrix(m, k, std::move(u)),
                              Matrix(n, k, std::move(v)));
    } catch (const IntegrityError&) {
        throw;
    } catch (const Error& e) {
        throw IntegrityError(Kind::invalid_payload, std::string("model: ") + e.what());
    }
}

} // namespace lrk
