#include "protoscan/dns.hpp"

#include <set>

#include "protoscan/bytes.hpp"

namespace protoscan {

namespace {

// Decodes a possibly-compressed domain name starting at `offset`. Returns
// false on truncation, oversized labels, or a pointer loop.
bool decode_name(std::span<const uint8_t> msg, size_t offset, std::string &out, size_t &next_offset) {
    std::set<size_t> visited;
    bool jumped = false;
    next_offset = offset;
    out.clear();

    while (true) {
        if (offset >= msg.size()) return false;
        if (!visited.insert(offset).second) return false; // pointer loop
        uint8_t len = msg[offset];
        if ((len & 0xc0) == 0xc0) {
            if (offset + 1 >= msg.size()) return false;
            size_t target = (static_cast<size_t>(len & 0x3f) << 8) | msg[offset + 1];
            if (!jumped) next_offset = offset + 2;
            jumped = true;
            offset = target;
            continue;
        }
        if (len & 0xc0) return false; // reserved label types
        if (len == 0) {
            if (!jumped) next_offset = offset + 1;
            return true;
        }
        if (offset + 1 + len > msg.size()) return false;
        if (!out.empty()) out.push_back('.');
        out.append(reinterpret_cast<const char *>(msg.data() + offset + 1), len);
        if (out.size() > 255) return false;
        offset += 1 + len;
    }
}

struct DnsHeader {
    uint16_t id;
    bool qr;
    uint8_t rcode;
    uint16_t qdcount;
};

bool parse_header(std::span<const uint8_t> msg, DnsHeader &h) {
    if (msg.size() < 12) return false;
    h.id = be16(msg.data());
    h.qr = (msg[2] & 0x80) != 0;
    h.rcode = msg[3] & 0x0f;
    h.qdcount = be16(msg.data() + 4);
    return true;
}

} // namespace

std::optional<DnsAttributes> extract_dns(const Flow &f, const FlowConfig &config) {
    PayloadStream req = ordered_payload(f, Direction::request, config);
    size_t req_len = req.first_packet_len ? std::min(req.first_packet_len, req.bytes.size())
                                          : req.bytes.size();
    std::span<const uint8_t> msg(req.bytes.data(), req_len);

    DnsAttributes attrs;
    DnsHeader h;
    if (!parse_header(msg, h)) return std::nullopt;
    attrs.transaction_id = h.id;
    attrs.request_is_response = h.qr;

    size_t offset = 12;
    for (uint16_t i = 0; i < h.qdcount; ++i) {
        std::string name;
        size_t next = 0;
        if (!decode_name(msg, offset, name, next)) return std::nullopt;
        if (next + 4 > msg.size()) return std::nullopt;
        attrs.query_names.push_back(std::move(name));
        attrs.query_types.push_back(be16(msg.data() + next));
        offset = next + 4; // qtype + qclass
    }

    PayloadStream resp = ordered_payload(f, Direction::response, config);
    if (!resp.bytes.empty()) {
        size_t resp_len = resp.first_packet_len ? std::min(resp.first_packet_len, resp.bytes.size())
                                                : resp.bytes.size();
        DnsHeader rh;
        if (parse_header(std::span<const uint8_t>(resp.bytes.data(), resp_len), rh)) {
            attrs.response_seen = true;
            attrs.response_is_response = rh.qr;
            attrs.response_code = rh.rcode;
        }
    }
    return attrs;
}

} // namespace protoscan
