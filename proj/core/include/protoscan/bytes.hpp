#ifndef PROTOSCAN_BYTES_HPP
#define PROTOSCAN_BYTES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace protoscan {

// Hex encoding used by model documents and fingerprints: lowercase, no
// separators, two digits per byte.
std::string to_hex(std::span<const uint8_t> data);

// Accepts upper or lower case; an optional "0x" prefix is tolerated.
// Throws std::invalid_argument on odd length or non-hex characters.
std::vector<uint8_t> from_hex(std::string_view text);

inline uint16_t be16(const uint8_t *p) {
    return static_cast<uint16_t>(p[0]) << 8 | p[1];
}

inline uint32_t be32(const uint8_t *p) {
    return static_cast<uint32_t>(p[0]) << 24 | static_cast<uint32_t>(p[1]) << 16 |
           static_cast<uint32_t>(p[2]) << 8 | p[3];
}

inline void put_be16(std::vector<uint8_t> &out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void put_be32(std::vector<uint8_t> &out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

// Sequential reader over a byte span. All getters throw std::out_of_range
// when the requested bytes are not available; callers translate that into
// their own malformed-input handling.
class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    size_t remaining() const { return data_.size() - pos_; }
    size_t position() const { return pos_; }
    bool empty() const { return remaining() == 0; }

    uint8_t u8();
    uint16_t u16be();
    uint32_t u32be();
    std::span<const uint8_t> bytes(size_t n);
    void skip(size_t n);

private:
    void require(size_t n) const;

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

} // namespace protoscan

#endif
