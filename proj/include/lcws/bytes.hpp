#ifndef LCWS_BYTES_HPP
#define LCWS_BYTES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lcws {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

void xor_into(std::span<std::uint8_t> dst, ByteView src);

/// Big-endian append-only encoder used by every wire and key-file format.
class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(ByteView data) { out_.insert(out_.end(), data.begin(), data.end()); }
    /// 4-byte length prefix followed by the data.
    void section(ByteView data);

    const Bytes& bytes() const& { return out_; }
    Bytes take() && { return std::move(out_); }

private:
    Bytes out_;
};

/// Bounds-checked decoder; every read past the end throws a decode error.
class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    ByteView raw(std::size_t n);
    ByteView section();

    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    /// Throws unless the whole buffer has been consumed.
    void expect_done(const char* what) const;

private:
    ByteView data_;
    std::size_t pos_ = 0;
};

} // namespace lcws

#endif
