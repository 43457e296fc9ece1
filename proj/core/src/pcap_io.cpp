#include "protoscan/pcap_io.hpp"

#include <cstdio>
#include <fstream>

namespace protoscan {

namespace {

constexpr uint32_t kMagic = 0xa1b2c3d4;
constexpr uint32_t kMagicSwapped = 0xd4c3b2a1;
constexpr uint32_t kMagicNanos = 0xa1b23c4d;
constexpr uint32_t kMagicNanosSwapped = 0x4d3cb2a1;

uint32_t read_u32(const uint8_t *p, bool swapped) {
    // File values are stored little-endian by write_pcap; "swapped" files
    // store the opposite order. Decode explicitly so host endianness never
    // matters.
    if (swapped) {
        return static_cast<uint32_t>(p[0]) << 24 | static_cast<uint32_t>(p[1]) << 16 |
               static_cast<uint32_t>(p[2]) << 8 | p[3];
    }
    return static_cast<uint32_t>(p[3]) << 24 | static_cast<uint32_t>(p[2]) << 16 |
           static_cast<uint32_t>(p[1]) << 8 | p[0];
}

uint16_t read_u16(const uint8_t *p, bool swapped) {
    if (swapped) return static_cast<uint16_t>(p[0]) << 8 | p[1];
    return static_cast<uint16_t>(p[1]) << 8 | p[0];
}

void append_u32(std::vector<uint8_t> &out, uint32_t v, bool swapped) {
    if (swapped) {
        out.push_back(static_cast<uint8_t>(v >> 24));
        out.push_back(static_cast<uint8_t>(v >> 16));
        out.push_back(static_cast<uint8_t>(v >> 8));
        out.push_back(static_cast<uint8_t>(v));
    } else {
        out.push_back(static_cast<uint8_t>(v));
        out.push_back(static_cast<uint8_t>(v >> 8));
        out.push_back(static_cast<uint8_t>(v >> 16));
        out.push_back(static_cast<uint8_t>(v >> 24));
    }
}

void append_u16(std::vector<uint8_t> &out, uint16_t v, bool swapped) {
    if (swapped) {
        out.push_back(static_cast<uint8_t>(v >> 8));
        out.push_back(static_cast<uint8_t>(v));
    } else {
        out.push_back(static_cast<uint8_t>(v));
        out.push_back(static_cast<uint8_t>(v >> 8));
    }
}

} // namespace

CaptureFile read_pcap(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw PcapError(PcapError::Kind::io, "cannot open " + path.string());
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw PcapError(PcapError::Kind::io, "read failure on " + path.string());
    }
    if (bytes.size() < 24) {
        throw PcapError(PcapError::Kind::unsupported_format, "file shorter than a pcap global header");
    }

    uint32_t magic_le = read_u32(bytes.data(), false);
    bool swapped;
    if (magic_le == kMagic) {
        swapped = false;
    } else if (magic_le == kMagicSwapped) {
        swapped = true;
    } else if (magic_le == kMagicNanos || magic_le == kMagicNanosSwapped) {
        throw PcapError(PcapError::Kind::unsupported_format, "nanosecond pcap is not supported");
    } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "bad pcap magic 0x%08x", magic_le);
        throw PcapError(PcapError::Kind::unsupported_format, buf);
    }

    CaptureFile cap;
    cap.byte_swapped = swapped;
    cap.snaplen = read_u32(bytes.data() + 16, swapped);
    uint32_t network = read_u32(bytes.data() + 20, swapped);
    if (network != 1) {
        throw PcapError(PcapError::Kind::unsupported_linktype,
                        "linktype " + std::to_string(network) + " is not Ethernet");
    }

    size_t off = 24;
    size_t index = 0;
    while (off < bytes.size()) {
        if (bytes.size() - off < 16) {
            cap.warnings.push_back("truncated record header at offset " + std::to_string(off) + ", dropped");
            break;
        }
        RawPacket pkt;
        pkt.ts_sec = read_u32(bytes.data() + off, swapped);
        pkt.ts_frac = read_u32(bytes.data() + off + 4, swapped);
        uint32_t incl_len = read_u32(bytes.data() + off + 8, swapped);
        pkt.original_len = read_u32(bytes.data() + off + 12, swapped);
        off += 16;
        if (bytes.size() - off < incl_len) {
            cap.warnings.push_back("record " + std::to_string(index) + " claims " + std::to_string(incl_len) +
                                   " bytes past end of file, dropped");
            break;
        }
        pkt.data.assign(bytes.begin() + static_cast<long>(off), bytes.begin() + static_cast<long>(off + incl_len));
        off += incl_len;
        cap.packets.push_back(std::move(pkt));
        ++index;
    }
    return cap;
}

void write_pcap(const std::filesystem::path &path, std::span<const RawPacket> packets, PcapByteOrder order) {
    bool swapped = order == PcapByteOrder::swapped;
    std::vector<uint8_t> out;
    out.reserve(24 + packets.size() * 80);

    append_u32(out, kMagic, swapped);
    append_u16(out, 2, swapped); // version major
    append_u16(out, 4, swapped); // version minor
    append_u32(out, 0, swapped); // thiszone
    append_u32(out, 0, swapped); // sigfigs
    append_u32(out, 65535, swapped);
    append_u32(out, 1, swapped); // linktype: Ethernet

    for (const auto &pkt : packets) {
        append_u32(out, pkt.ts_sec, swapped);
        append_u32(out, pkt.ts_frac, swapped);
        append_u32(out, pkt.captured_len(), swapped);
        append_u32(out, pkt.original_len, swapped);
        out.insert(out.end(), pkt.data.begin(), pkt.data.end());
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw PcapError(PcapError::Kind::io, "cannot open " + path.string() + " for writing");
    }
    f.write(reinterpret_cast<const char *>(out.data()), static_cast<long>(out.size()));
    if (!f) {
        throw PcapError(PcapError::Kind::io, "write failure on " + path.string());
    }
}

} // namespace protoscan
