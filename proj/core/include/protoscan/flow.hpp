#ifndef PROTOSCAN_FLOW_HPP
#define PROTOSCAN_FLOW_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "protoscan/packet.hpp"

namespace protoscan {

struct Endpoint {
    IpAddress ip;
    uint16_t port = 0;

    auto operator<=>(const Endpoint &) const = default;
};

// Canonical bidirectional 5-tuple: endpoint_a <= endpoint_b, so both
// directions of a conversation map to one key.
struct FlowKey {
    Endpoint endpoint_a;
    Endpoint endpoint_b;
    uint8_t ip_protocol = 0;

    auto operator<=>(const FlowKey &) const = default;
};

enum class Direction { request, response, combined };

std::string_view to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view s);

// Returns the canonical key plus whether the packet's sender is
// endpoint_a. Packets without transport ports are not flow packets.
std::optional<std::pair<FlowKey, bool>> flow_key(const ParsedPacket &p);

struct FlowPacket {
    Direction dir = Direction::request;
    ParsedPacket pkt;
};

struct Flow {
    FlowKey key;
    Endpoint initiator;
    Endpoint responder;
    std::array<uint8_t, 6> initiator_mac{};
    std::vector<FlowPacket> packets;
    Timestamp first_ts;
    Timestamp last_ts;
    uint8_t request_ip_ttl_first = 0;
    TrafficMode request_traffic_mode = TrafficMode::unicast;

    bool is_tcp() const { return key.ip_protocol == kIpProtoTcp; }
    uint8_t ip_protocol() const { return key.ip_protocol; }
};

struct FlowConfig {
    double timeout_sec = 3600.0;      // idle gap that splits a key into a new flow
    size_t payload_cap = 64 * 1024;   // retained payload bytes per direction
};

// Groups decoded packets into flows. The initiator is the sender of the
// first observed packet; a TCP SYN without ACK overrides it. Packets
// beyond the per-direction payload cap are kept with their payload
// dropped so counts stay accurate.
std::vector<Flow> assemble(std::span<const ParsedPacket> packets, const FlowConfig &config = {});

struct PayloadStream {
    std::vector<uint8_t> bytes;
    bool gap_truncated = false;
    size_t first_packet_len = 0; // payload length of the direction's first packet
};

// Contiguous application bytes for one direction. UDP concatenates in
// arrival order. TCP orders segments by relative sequence number with
// first-writer-wins overlap resolution; a hole truncates the stream and
// sets gap_truncated. Direction::combined is request followed by response.
PayloadStream ordered_payload(const Flow &f, Direction d, const FlowConfig &config = {});

} // namespace protoscan

#endif
