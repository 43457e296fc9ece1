#ifndef PROTOSCAN_PCAP_IO_HPP
#define PROTOSCAN_PCAP_IO_HPP

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "protoscan/packet.hpp"

namespace protoscan {

class PcapError : public std::runtime_error {
public:
    enum class Kind { io, unsupported_format, unsupported_linktype };

    PcapError(Kind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}

    Kind kind;
};

struct CaptureFile {
    std::vector<RawPacket> packets;
    bool byte_swapped = false;
    uint32_t snaplen = 65535;
    std::vector<std::string> warnings; // truncated trailing records etc.
};

// Classic pcap only (magic 0xa1b2c3d4 in either byte order), linktype 1.
// A trailing record cut short by EOF is dropped with a warning. The
// nanosecond-resolution magic is rejected as unsupported.
CaptureFile read_pcap(const std::filesystem::path &path);

enum class PcapByteOrder { native, swapped };

// Writes magic 0xa1b2c3d4, version 2.4, linktype 1. Record headers carry
// each packet's timestamp and lengths verbatim, so read_pcap(write_pcap(S))
// reproduces S byte for byte. `swapped` writes every header field in the
// opposite byte order, for endianness testing.
void write_pcap(const std::filesystem::path &path, std::span<const RawPacket> packets,
                PcapByteOrder order = PcapByteOrder::native);

} // namespace protoscan

#endif
