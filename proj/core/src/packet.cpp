#include "protoscan/packet.hpp"

#include <cstdio>
#include <cstring>

#include "protoscan/bytes.hpp"

namespace protoscan {

IpAddress IpAddress::from_v4(const uint8_t *p) {
    IpAddress a;
    a.v6_ = false;
    std::memcpy(a.bytes_.data(), p, 4);
    return a;
}

IpAddress IpAddress::from_v6(const uint8_t *p) {
    IpAddress a;
    a.v6_ = true;
    std::memcpy(a.bytes_.data(), p, 16);
    return a;
}

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
    std::string s(text);
    if (s.find(':') != std::string::npos) {
        // Limited IPv6 parser: full or '::'-compressed hex groups.
        std::array<uint16_t, 8> groups{};
        size_t gap = std::string::npos;
        std::vector<uint16_t> parts;
        size_t i = 0;
        if (s.rfind("::", 0) == 0) {
            gap = 0;
            i = 2;
        }
        while (i < s.size()) {
            size_t j = s.find(':', i);
            std::string g = s.substr(i, j == std::string::npos ? j : j - i);
            if (g.empty()) return std::nullopt;
            char *end = nullptr;
            unsigned long v = std::strtoul(g.c_str(), &end, 16);
            if (*end != '\0' || v > 0xffff) return std::nullopt;
            parts.push_back(static_cast<uint16_t>(v));
            if (j == std::string::npos) break;
            i = j + 1;
            if (i < s.size() && s[i] == ':') {
                if (gap != std::string::npos) return std::nullopt;
                gap = parts.size();
                ++i;
            }
        }
        if (gap == std::string::npos) {
            if (parts.size() != 8) return std::nullopt;
            for (size_t k = 0; k < 8; ++k) groups[k] = parts[k];
        } else {
            if (parts.size() > 7) return std::nullopt;
            for (size_t k = 0; k < gap; ++k) groups[k] = parts[k];
            size_t tail = parts.size() - gap;
            for (size_t k = 0; k < tail; ++k) groups[8 - tail + k] = parts[gap + k];
        }
        std::array<uint8_t, 16> b{};
        for (size_t k = 0; k < 8; ++k) {
            b[k * 2] = static_cast<uint8_t>(groups[k] >> 8);
            b[k * 2 + 1] = static_cast<uint8_t>(groups[k]);
        }
        return from_v6(b.data());
    }

    std::array<uint8_t, 4> b{};
    int field = 0;
    unsigned long acc = 0;
    bool have_digit = false;
    for (char c : s) {
        if (c >= '0' && c <= '9') {
            acc = acc * 10 + static_cast<unsigned long>(c - '0');
            if (acc > 255) return std::nullopt;
            have_digit = true;
        } else if (c == '.') {
            if (!have_digit || field >= 3) return std::nullopt;
            b[field++] = static_cast<uint8_t>(acc);
            acc = 0;
            have_digit = false;
        } else {
            return std::nullopt;
        }
    }
    if (!have_digit || field != 3) return std::nullopt;
    b[3] = static_cast<uint8_t>(acc);
    return from_v4(b.data());
}

bool IpAddress::is_multicast() const {
    if (v6_) return bytes_[0] == 0xff;
    return (bytes_[0] & 0xf0) == 0xe0;
}

bool IpAddress::is_broadcast() const {
    if (v6_) return false;
    return bytes_[0] == 255 && bytes_[1] == 255 && bytes_[2] == 255 && bytes_[3] == 255;
}

std::string IpAddress::to_string() const {
    char buf[64];
    if (!v6_) {
        std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", bytes_[0], bytes_[1], bytes_[2], bytes_[3]);
        return buf;
    }
    std::string out;
    for (int i = 0; i < 8; ++i) {
        if (i) out.push_back(':');
        std::snprintf(buf, sizeof buf, "%x", be16(bytes_.data() + i * 2));
        out += buf;
    }
    return out;
}

std::string_view to_string(TrafficMode m) {
    switch (m) {
    case TrafficMode::unicast: return "unicast";
    case TrafficMode::multicast: return "multicast";
    case TrafficMode::broadcast: return "broadcast";
    }
    return "unicast";
}

std::string mac_to_string(const std::array<uint8_t, 6> &mac) {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x",
                  mac[0], mac[1], mac[2], mac[3], mac[4], mac[5]);
    return buf;
}

namespace {

TrafficMode mode_from_mac(const std::array<uint8_t, 6> &dst) {
    bool all_ff = true;
    for (uint8_t b : dst) all_ff = all_ff && b == 0xff;
    if (all_ff) return TrafficMode::broadcast;
    if (dst[0] & 0x01) return TrafficMode::multicast;
    return TrafficMode::unicast;
}

TrafficMode mode_from_ip(const IpAddress &dst) {
    if (dst.is_broadcast()) return TrafficMode::broadcast;
    if (dst.is_multicast()) return TrafficMode::multicast;
    return TrafficMode::unicast;
}

enum class L3Result { ok, malformed, fragment };

// Decodes the transport header and payload. `l3_payload` is the byte range
// the IP header declares, already bounded to what was captured.
L3Result decode_transport(ParsedPacket &pkt, std::span<const uint8_t> l3_payload) {
    if (pkt.ip_protocol == kIpProtoTcp) {
        if (l3_payload.size() < 20) return L3Result::malformed;
        pkt.src_port = be16(l3_payload.data());
        pkt.dst_port = be16(l3_payload.data() + 2);
        pkt.tcp_seq = be32(l3_payload.data() + 4);
        size_t data_off = (l3_payload[12] >> 4) * 4u;
        if (data_off < 20 || data_off > l3_payload.size()) return L3Result::malformed;
        pkt.tcp_flags.raw = l3_payload[13];
        pkt.has_ports = true;
        pkt.payload.assign(l3_payload.begin() + static_cast<long>(data_off), l3_payload.end());
        return L3Result::ok;
    }
    if (pkt.ip_protocol == kIpProtoUdp) {
        if (l3_payload.size() < 8) return L3Result::malformed;
        pkt.src_port = be16(l3_payload.data());
        pkt.dst_port = be16(l3_payload.data() + 2);
        uint16_t udp_len = be16(l3_payload.data() + 4);
        if (udp_len < 8) return L3Result::malformed;
        size_t data_len = std::min<size_t>(udp_len - 8, l3_payload.size() - 8);
        pkt.has_ports = true;
        pkt.payload.assign(l3_payload.begin() + 8, l3_payload.begin() + 8 + static_cast<long>(data_len));
        return L3Result::ok;
    }
    // Other IP protocols are kept as metadata-only packets.
    pkt.payload.clear();
    return L3Result::ok;
}

L3Result decode_ipv4(ParsedPacket &pkt, std::span<const uint8_t> ip) {
    if (ip.size() < 20) return L3Result::malformed;
    if ((ip[0] >> 4) != 4) return L3Result::malformed;
    size_t ihl = (ip[0] & 0x0f) * 4u;
    if (ihl < 20 || ihl > ip.size()) return L3Result::malformed;

    uint16_t total_len = be16(ip.data() + 2);
    if (total_len < ihl) return L3Result::malformed;

    uint16_t frag = be16(ip.data() + 6);
    if ((frag & 0x1fff) != 0) return L3Result::fragment; // non-first fragment

    pkt.net = ParsedPacket::Net::ipv4;
    pkt.ip_ttl = ip[8];
    pkt.ip_protocol = ip[9];
    pkt.src_ip = IpAddress::from_v4(ip.data() + 12);
    pkt.dst_ip = IpAddress::from_v4(ip.data() + 16);
    pkt.traffic_mode = mode_from_ip(pkt.dst_ip);

    // Ethernet frames may be padded; the IP total length bounds the
    // transport bytes. A snap-length truncation bounds them further.
    size_t declared = std::min<size_t>(total_len, ip.size());
    return decode_transport(pkt, ip.subspan(ihl, declared - ihl));
}

L3Result decode_ipv6(ParsedPacket &pkt, std::span<const uint8_t> ip) {
    if (ip.size() < 40) return L3Result::malformed;
    if ((ip[0] >> 4) != 6) return L3Result::malformed;

    uint16_t payload_len = be16(ip.data() + 4);
    uint8_t next = ip[6];
    pkt.net = ParsedPacket::Net::ipv6;
    pkt.ip_ttl = ip[7]; // hop limit
    pkt.src_ip = IpAddress::from_v6(ip.data() + 8);
    pkt.dst_ip = IpAddress::from_v6(ip.data() + 24);
    pkt.traffic_mode = mode_from_ip(pkt.dst_ip);

    size_t declared = std::min<size_t>(40u + payload_len, ip.size());
    size_t off = 40;
    // Walk the common extension-header chain.
    while (true) {
        if (next == 0 || next == 43 || next == 60) {
            if (off + 8 > declared) return L3Result::malformed;
            uint8_t hdr_next = ip[off];
            size_t ext_len = (static_cast<size_t>(ip[off + 1]) + 1) * 8;
            if (off + ext_len > declared) return L3Result::malformed;
            next = hdr_next;
            off += ext_len;
        } else if (next == 44) {
            if (off + 8 > declared) return L3Result::malformed;
            uint16_t frag_off = static_cast<uint16_t>(be16(ip.data() + off + 2) >> 3);
            if (frag_off != 0) return L3Result::fragment;
            next = ip[off];
            off += 8;
        } else {
            break;
        }
    }
    pkt.ip_protocol = next;
    return decode_transport(pkt, ip.subspan(off, declared - off));
}

std::optional<ParsedPacket> decode_impl(const RawPacket &raw, L3Result &why) {
    why = L3Result::malformed;
    const auto &d = raw.data;
    if (d.size() < 14) return std::nullopt;

    ParsedPacket pkt;
    pkt.ts = raw.timestamp();
    std::memcpy(pkt.dst_mac.data(), d.data(), 6);
    std::memcpy(pkt.src_mac.data(), d.data() + 6, 6);

    size_t off = 12;
    uint16_t ether = be16(d.data() + off);
    off += 2;
    if (ether == kEtherTypeVlan) {
        if (d.size() < off + 4) return std::nullopt;
        ether = be16(d.data() + off + 2);
        off += 4;
    }
    pkt.ether_type = ether;

    std::span<const uint8_t> rest(d.data() + off, d.size() - off);
    L3Result r;
    if (ether == kEtherTypeIpv4) {
        r = decode_ipv4(pkt, rest);
    } else if (ether == kEtherTypeIpv6) {
        r = decode_ipv6(pkt, rest);
    } else {
        pkt.net = ParsedPacket::Net::none;
        pkt.traffic_mode = mode_from_mac(pkt.dst_mac);
        pkt.payload.clear();
        why = L3Result::ok;
        return pkt;
    }
    if (r != L3Result::ok) {
        why = r;
        return std::nullopt;
    }
    why = L3Result::ok;
    return pkt;
}

} // namespace

std::optional<ParsedPacket> decode_packet(const RawPacket &raw) {
    L3Result why;
    return decode_impl(raw, why);
}

std::vector<ParsedPacket> decode_stream(const std::vector<RawPacket> &raw, DecodeStats *stats) {
    std::vector<ParsedPacket> out;
    out.reserve(raw.size());
    DecodeStats local;
    for (const auto &r : raw) {
        L3Result why;
        auto p = decode_impl(r, why);
        if (!p) {
            if (why == L3Result::fragment) {
                ++local.fragments_skipped;
            } else {
                ++local.malformed;
            }
            continue;
        }
        ++local.decoded;
        if (!p->is_ip()) ++local.non_ip;
        out.push_back(std::move(*p));
    }
    if (stats) *stats = local;
    return out;
}

} // namespace protoscan
