#include "protoscan/bytes.hpp"

#include <stdexcept>

namespace protoscan {

std::string to_hex(std::span<const uint8_t> data) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::vector<uint8_t> from_hex(std::string_view text) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
    }
    if (text.size() % 2 != 0) {
        throw std::invalid_argument("hex string has odd length: " + std::string(text));
    }
    std::vector<uint8_t> out;
    out.reserve(text.size() / 2);
    for (size_t i = 0; i < text.size(); i += 2) {
        int hi = hex_nibble(text[i]);
        int lo = hex_nibble(text[i + 1]);
        if (hi < 0 || lo < 0) {
            throw std::invalid_argument("invalid hex digit in: " + std::string(text));
        }
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

void ByteReader::require(size_t n) const {
    if (remaining() < n) {
        throw std::out_of_range("byte reader underrun");
    }
}

uint8_t ByteReader::u8() {
    require(1);
    return data_[pos_++];
}

uint16_t ByteReader::u16be() {
    require(2);
    uint16_t v = be16(data_.data() + pos_);
    pos_ += 2;
    return v;
}

uint32_t ByteReader::u32be() {
    require(4);
    uint32_t v = be32(data_.data() + pos_);
    pos_ += 4;
    return v;
}

std::span<const uint8_t> ByteReader::bytes(size_t n) {
    require(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
}

void ByteReader::skip(size_t n) {
    require(n);
    pos_ += n;
}

} // namespace protoscan
