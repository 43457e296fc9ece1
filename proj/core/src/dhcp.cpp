#include "protoscan/dhcp.hpp"

namespace protoscan {

namespace {

constexpr size_t kFixedLen = 240; // 236-byte BOOTP header + 4-byte cookie
const uint8_t kCookie[4] = {0x63, 0x82, 0x53, 0x63};

const ParsedPacket *pick_packet(const Flow &f) {
    for (const auto &fp : f.packets) {
        if (fp.dir == Direction::request && !fp.pkt.payload.empty()) return &fp.pkt;
    }
    for (const auto &fp : f.packets) {
        if (!fp.pkt.payload.empty()) return &fp.pkt;
    }
    return nullptr;
}

} // namespace

std::optional<DhcpAttributes> extract_dhcp(const Flow &f, const FlowConfig &) {
    const ParsedPacket *pkt = pick_packet(f);
    if (!pkt || pkt->payload.size() < kFixedLen) return std::nullopt;
    const auto &p = pkt->payload;

    DhcpAttributes attrs;
    attrs.op = p[0];
    attrs.magic_cookie_ok =
        p[236] == kCookie[0] && p[237] == kCookie[1] && p[238] == kCookie[2] && p[239] == kCookie[3];
    if (!attrs.magic_cookie_ok) return attrs;

    size_t i = kFixedLen;
    while (i < p.size()) {
        uint8_t code = p[i++];
        if (code == 0) continue;  // pad
        if (code == 255) break;   // end
        if (i >= p.size()) break;
        uint8_t len = p[i++];
        if (i + len > p.size()) break;
        switch (code) {
        case 53:
            if (len >= 1) attrs.message_type = p[i];
            break;
        case 55:
            attrs.parameter_request_list.assign(p.begin() + static_cast<long>(i),
                                                p.begin() + static_cast<long>(i + len));
            break;
        case 12:
            attrs.requested_hostname.assign(reinterpret_cast<const char *>(p.data() + i), len);
            break;
        default:
            break;
        }
        i += len;
    }
    return attrs;
}

} // namespace protoscan
