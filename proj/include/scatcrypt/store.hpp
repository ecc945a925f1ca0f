#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include <zlib.h>

#include <Eigen/Dense>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/image.hpp"
#include "scatcrypt/wavefield.hpp"

namespace scatcrypt {

// --- byte packing (fixed little-endian layout, platform independent) --------

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
}

inline std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t at) {
    return static_cast<std::uint16_t>(in[at] | (in[at + 1] << 8));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | in[at + static_cast<std::size_t>(i)];
    return v;
}

inline std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | in[at + static_cast<std::size_t>(i)];
    return v;
}

inline double get_f64(std::span<const std::uint8_t> in, std::size_t at) {
    const std::uint64_t bits = get_u64(in, at);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

} // namespace detail

// --- whole-file helpers ------------------------------------------------------

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoFailure("read error on " + path.string());
    return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path,
                             std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write error on " + path.string());
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
    write_file_bytes(path, std::span<const std::uint8_t>(
                               reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline std::string read_text_file(const std::filesystem::path& path) {
    auto bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

// --- SCM1 matrix container ---------------------------------------------------
//
// Layout: magic "SCM1" (4) | version u16 | dtype u16 (0 = complex128) |
// rows u64 | cols u64 | payload row-major (re, im) f64 LE | crc32(payload) u32.

inline constexpr std::array<std::uint8_t, 4> scm_magic{'S', 'C', 'M', '1'};
inline constexpr std::uint16_t scm_version = 1;
inline constexpr std::uint16_t scm_dtype_complex128 = 0;

inline std::vector<std::uint8_t> matrix_container_bytes(const CMatrix& m) {
    std::vector<std::uint8_t> out;
    out.reserve(24 + static_cast<std::size_t>(m.size()) * 16 + 4);
    out.insert(out.end(), scm_magic.begin(), scm_magic.end());
    detail::put_u16(out, scm_version);
    detail::put_u16(out, scm_dtype_complex128);
    detail::put_u64(out, static_cast<std::uint64_t>(m.rows()));
    detail::put_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            detail::put_f64(out, m(r, c).real());
            detail::put_f64(out, m(r, c).imag());
        }
    }
    const auto crc = static_cast<std::uint32_t>(
        crc32(0L, out.data() + 24, static_cast<uInt>(out.size() - 24)));
    detail::put_u32(out, crc);
    return out;
}

inline void save_matrix(const CMatrix& m, const std::filesystem::path& path) {
    write_file_bytes(path, matrix_container_bytes(m));
}

inline CMatrix matrix_from_container_bytes(std::span<const std::uint8_t> bytes,
                                           const std::string& origin = "<memory>") {
    if (bytes.size() < 24) throw IoFailure(origin + ": truncated header (" +
                                           std::to_string(bytes.size()) + " bytes, need 24)");
    if (!std::equal(scm_magic.begin(), scm_magic.end(), bytes.begin()))
        throw BadMagic(origin + ": not an SCM1 container");
    const std::uint16_t version = detail::get_u16(bytes, 4);
    if (version != scm_version)
        throw UnsupportedVersion(origin + ": container version " + std::to_string(version));
    const std::uint16_t dtype = detail::get_u16(bytes, 6);
    if (dtype != scm_dtype_complex128)
        throw UnsupportedVersion(origin + ": unsupported dtype code " + std::to_string(dtype));

    const std::uint64_t rows = detail::get_u64(bytes, 8);
    const std::uint64_t cols = detail::get_u64(bytes, 16);
    const std::uint64_t payload = rows * cols * 16;
    if (bytes.size() != 24 + payload + 4)
        throw IoFailure(origin + ": expected " + std::to_string(24 + payload + 4) + " bytes for " +
                        std::to_string(rows) + "x" + std::to_string(cols) + ", found " +
                        std::to_string(bytes.size()));

    const auto stored_crc = detail::get_u32(bytes, 24 + payload);
    const auto crc = static_cast<std::uint32_t>(
        crc32(0L, bytes.data() + 24, static_cast<uInt>(payload)));
    if (crc != stored_crc) throw BadChecksum(origin + ": payload checksum mismatch");

    CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::size_t at = 24;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double re = detail::get_f64(bytes, at);
            const double im = detail::get_f64(bytes, at + 8);
            m(r, c) = Complex(re, im);
            at += 16;
        }
    }
    return m;
}

inline CMatrix load_matrix(const std::filesystem::path& path) {
    return matrix_from_container_bytes(read_file_bytes(path), path.string());
}

inline void save_field(const CVector& v, const std::filesystem::path& path) {
    save_matrix(CMatrix(v), path);
}

inline CVector load_field(const std::filesystem::path& path) {
    const CMatrix m = load_matrix(path);
    if (m.cols() != 1) throw IoFailure(path.string() + ": expected a single-column field");
    return m.col(0);
}

// --- base64 ------------------------------------------------------------------

inline std::string base64_encode(std::span<const std::uint8_t> bytes) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back(alphabet[v & 63]);
    }
    if (i + 1 == bytes.size()) {
        const std::uint32_t v = bytes[i] << 16;
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == bytes.size()) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

inline std::vector<std::uint8_t> base64_decode(std::string_view text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=') break;
        const int v = value_of(c);
        if (v < 0) throw IoFailure("invalid base64 character");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
        }
    }
    return out;
}

/// Real vectors travel inside JSON bundles as base64 of their LE f64 bytes;
/// this keeps ciphertext files bit-exact.
inline std::string base64_f64(const Eigen::VectorXd& v) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(static_cast<std::size_t>(v.size()) * 8);
    for (Eigen::Index i = 0; i < v.size(); ++i) detail::put_f64(bytes, v(i));
    return base64_encode(bytes);
}

inline Eigen::VectorXd f64_from_base64(std::string_view text) {
    const auto bytes = base64_decode(text);
    if (bytes.size() % 8 != 0) throw IoFailure("base64 f64 payload not a multiple of 8 bytes");
    Eigen::VectorXd v(static_cast<Eigen::Index>(bytes.size() / 8));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = detail::get_f64(bytes, static_cast<std::size_t>(i) * 8);
    return v;
}

inline std::string base64_c128(const CVector& v) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(static_cast<std::size_t>(v.size()) * 16);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        detail::put_f64(bytes, v(i).real());
        detail::put_f64(bytes, v(i).imag());
    }
    return base64_encode(bytes);
}

inline CVector c128_from_base64(std::string_view text) {
    const auto bytes = base64_decode(text);
    if (bytes.size() % 16 != 0) throw IoFailure("base64 c128 payload not a multiple of 16 bytes");
    CVector v(static_cast<Eigen::Index>(bytes.size() / 16));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const std::size_t at = static_cast<std::size_t>(i) * 16;
        v(i) = Complex(detail::get_f64(bytes, at), detail::get_f64(bytes, at + 8));
    }
    return v;
}

// --- PGM (P5, 8-bit) ----------------------------------------------------------

inline void write_pgm(const PlaintextImage& img, const std::filesystem::path& path) {
    img.validate();
    std::vector<std::uint8_t> body;
    const std::string header =
        "P5\n" + std::to_string(img.nx) + " " + std::to_string(img.nz) + "\n255\n";
    body.insert(body.end(), header.begin(), header.end());
    for (Eigen::Index i = 0; i < img.pixels.size(); ++i) {
        const double v = std::clamp(img.pixels(i), 0.0, 1.0);
        body.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
    }
    write_file_bytes(path, body);
}

inline PlaintextImage read_pgm(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    std::size_t at = 0;
    auto next_token = [&]() -> std::string {
        while (at < bytes.size()) {
            if (std::isspace(bytes[at])) {
                ++at;
            } else if (bytes[at] == '#') {
                while (at < bytes.size() && bytes[at] != '\n') ++at;
            } else {
                break;
            }
        }
        std::string tok;
        while (at < bytes.size() && !std::isspace(bytes[at])) tok.push_back(char(bytes[at++]));
        return tok;
    };

    if (next_token() != "P5") throw IoFailure(path.string() + ": not a binary PGM (P5)");
    PlaintextImage img;
    img.source = path.string();
    try {
        img.nx = std::stoi(next_token());
        img.nz = std::stoi(next_token());
        const int maxval = std::stoi(next_token());
        if (img.nx < 1 || img.nz < 1 || maxval < 1 || maxval > 255)
            throw IoFailure(path.string() + ": unsupported PGM geometry or depth");
        ++at; // single whitespace after maxval
        const std::size_t need = static_cast<std::size_t>(img.nx) * img.nz;
        if (bytes.size() - at < need)
            throw IoFailure(path.string() + ": truncated PGM payload");
        img.pixels.resize(static_cast<Eigen::Index>(need));
        for (std::size_t i = 0; i < need; ++i)
            img.pixels(static_cast<Eigen::Index>(i)) = double(bytes[at + i]) / maxval;
    } catch (const std::invalid_argument&) {
        throw IoFailure(path.string() + ": malformed PGM header");
    }
    return img;
}

// --- CSV -----------------------------------------------------------------------

inline std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace scatcrypt
