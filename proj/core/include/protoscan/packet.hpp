#ifndef PROTOSCAN_PACKET_HPP
#define PROTOSCAN_PACKET_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace protoscan {

struct Timestamp {
    uint32_t sec = 0;
    uint32_t usec = 0;

    double seconds() const { return static_cast<double>(sec) + usec * 1e-6; }
    auto operator<=>(const Timestamp &) const = default;
};

// IPv4 or IPv6 address as a value type. IPv4 occupies the first four
// bytes; the rest are zero.
class IpAddress {
public:
    IpAddress() = default;

    static IpAddress from_v4(const uint8_t *p);
    static IpAddress from_v6(const uint8_t *p);
    static std::optional<IpAddress> parse(std::string_view text);

    bool is_v6() const { return v6_; }
    const std::array<uint8_t, 16> &bytes() const { return bytes_; }

    bool is_multicast() const;
    bool is_broadcast() const;
    std::string to_string() const;

    auto operator<=>(const IpAddress &) const = default;

private:
    bool v6_ = false;
    std::array<uint8_t, 16> bytes_{};
};

enum class TrafficMode { unicast, multicast, broadcast };

std::string_view to_string(TrafficMode m);

struct TcpFlags {
    uint8_t raw = 0;

    bool fin() const { return raw & 0x01; }
    bool syn() const { return raw & 0x02; }
    bool rst() const { return raw & 0x04; }
    bool psh() const { return raw & 0x08; }
    bool ack() const { return raw & 0x10; }

    auto operator<=>(const TcpFlags &) const = default;
};

// One record as stored in a capture file. captured_len is implicit in
// data.size(); original_len may exceed it when the capture was truncated
// by a snap length.
struct RawPacket {
    uint32_t ts_sec = 0;
    uint32_t ts_frac = 0; // microseconds
    uint32_t original_len = 0;
    std::vector<uint8_t> data;

    uint32_t captured_len() const { return static_cast<uint32_t>(data.size()); }
    Timestamp timestamp() const { return {ts_sec, ts_frac}; }

    bool operator==(const RawPacket &) const = default;
};

constexpr uint16_t kEtherTypeIpv4 = 0x0800;
constexpr uint16_t kEtherTypeIpv6 = 0x86dd;
constexpr uint16_t kEtherTypeVlan = 0x8100;
constexpr uint8_t kIpProtoTcp = 6;
constexpr uint8_t kIpProtoUdp = 17;

struct ParsedPacket {
    Timestamp ts;
    std::array<uint8_t, 6> src_mac{};
    std::array<uint8_t, 6> dst_mac{};
    uint16_t ether_type = 0;

    enum class Net { none, ipv4, ipv6 };
    Net net = Net::none;

    IpAddress src_ip;
    IpAddress dst_ip;
    uint8_t ip_ttl = 0;
    uint8_t ip_protocol = 0;

    bool has_ports = false;
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    uint32_t tcp_seq = 0;
    TcpFlags tcp_flags;

    TrafficMode traffic_mode = TrafficMode::unicast;
    std::vector<uint8_t> payload;

    bool is_ip() const { return net != Net::none; }
    bool is_tcp() const { return is_ip() && ip_protocol == kIpProtoTcp; }
    bool is_udp() const { return is_ip() && ip_protocol == kIpProtoUdp; }
};

// Counters for packets that could not be turned into flow input. The
// decoder never throws on arbitrary bytes: bad packets come back as
// nullopt and are tallied by the caller.
struct DecodeStats {
    uint64_t decoded = 0;
    uint64_t malformed = 0;
    uint64_t non_ip = 0;
    uint64_t fragments_skipped = 0;
};

// Decodes Ethernet -> (IPv4|IPv6) -> (TCP|UDP). A VLAN tag is skipped
// transparently. Non-IP ether types yield a packet with net == none and
// an empty payload. Returns nullopt for malformed headers and for
// non-first IPv4/IPv6 fragments (counted separately by decode_stream).
std::optional<ParsedPacket> decode_packet(const RawPacket &raw);

std::vector<ParsedPacket> decode_stream(const std::vector<RawPacket> &raw, DecodeStats *stats = nullptr);

std::string mac_to_string(const std::array<uint8_t, 6> &mac);

} // namespace protoscan

#endif
