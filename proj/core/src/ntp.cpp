#include "protoscan/ntp.hpp"

namespace protoscan {

namespace {

constexpr size_t kNtpBaseLen = 48;
constexpr size_t kOrgOffset = 24;

const ParsedPacket *first_with_payload(const Flow &f, Direction d) {
    for (const auto &fp : f.packets) {
        if (fp.dir == d && !fp.pkt.payload.empty()) return &fp.pkt;
    }
    return nullptr;
}

} // namespace

std::optional<NtpAttributes> extract_ntp(const Flow &f, const FlowConfig &) {
    const ParsedPacket *req = first_with_payload(f, Direction::request);
    if (!req || req->payload.size() < kNtpBaseLen) return std::nullopt;

    NtpAttributes attrs;
    uint8_t first = req->payload[0];
    attrs.client_version = (first >> 3) & 0x07;
    attrs.client_mode = first & 0x07;

    if (const ParsedPacket *resp = first_with_payload(f, Direction::response);
        resp && resp->payload.size() >= kNtpBaseLen) {
        attrs.server_seen = true;
        first = resp->payload[0];
        attrs.server_version = (first >> 3) & 0x07;
        attrs.server_mode = first & 0x07;
        attrs.server_org_zero = true;
        for (size_t i = kOrgOffset; i < kOrgOffset + 8; ++i) {
            if (resp->payload[i] != 0) {
                attrs.server_org_zero = false;
                break;
            }
        }
    }
    return attrs;
}

} // namespace protoscan
