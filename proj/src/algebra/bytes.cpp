#include "lcws/bytes.hpp"

#include <algorithm>

#include "lcws/error.hpp"

namespace lcws {

std::string to_hex(ByteView data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) throw Error(ErrorKind::argument, "hex string has odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(ErrorKind::argument, "invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void xor_into(std::span<std::uint8_t> dst, ByteView src) {
    if (src.size() != dst.size()) throw Error(ErrorKind::argument, "xor operands differ in length");
    std::transform(dst.begin(), dst.end(), src.begin(), dst.begin(),
                   [](std::uint8_t a, std::uint8_t b) { return static_cast<std::uint8_t>(a ^ b); });
}

void ByteWriter::u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) u8(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) u8(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::section(ByteView data) {
    if (data.size() > 0xffffffffu) throw Error(ErrorKind::argument, "section exceeds 4 GiB");
    u32(static_cast<std::uint32_t>(data.size()));
    raw(data);
}

ByteView ByteReader::raw(std::size_t n) {
    if (remaining() < n) throw Error(ErrorKind::decode, "truncated input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint16_t ByteReader::u16() {
    auto b = raw(2);
    return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t ByteReader::u32() {
    auto b = raw(4);
    std::uint32_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t ByteReader::u64() {
    auto b = raw(8);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

ByteView ByteReader::section() { return raw(u32()); }

void ByteReader::expect_done(const char* what) const {
    if (!done()) throw Error(ErrorKind::decode, std::string("trailing bytes after ") + what);
}

} // namespace lcws
