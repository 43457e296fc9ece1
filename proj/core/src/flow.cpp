#include "protoscan/flow.hpp"

#include <algorithm>
#include <map>

namespace protoscan {

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::request: return "request";
    case Direction::response: return "response";
    case Direction::combined: return "combined";
    }
    return "request";
}

std::optional<Direction> direction_from_string(std::string_view s) {
    if (s == "request") return Direction::request;
    if (s == "response") return Direction::response;
    if (s == "combined") return Direction::combined;
    return std::nullopt;
}

std::optional<std::pair<FlowKey, bool>> flow_key(const ParsedPacket &p) {
    if (!p.has_ports) return std::nullopt;
    Endpoint src{p.src_ip, p.src_port};
    Endpoint dst{p.dst_ip, p.dst_port};
    FlowKey key;
    key.ip_protocol = p.ip_protocol;
    bool sender_is_a = src <= dst;
    key.endpoint_a = sender_is_a ? src : dst;
    key.endpoint_b = sender_is_a ? dst : src;
    return std::make_pair(key, sender_is_a);
}

namespace {

struct ActiveFlow {
    FlowKey key;
    bool first_sender_is_a = true;
    std::optional<bool> syn_sender_is_a; // first SYN-without-ACK wins
    std::vector<std::pair<bool, ParsedPacket>> packets; // (sender_is_a, packet)
    Timestamp first_ts;
    Timestamp last_ts;
    size_t bytes_a = 0;
    size_t bytes_b = 0;
};

Flow finalize(ActiveFlow &&st) {
    bool initiator_is_a = st.syn_sender_is_a.value_or(st.first_sender_is_a);

    Flow f;
    f.key = st.key;
    f.initiator = initiator_is_a ? st.key.endpoint_a : st.key.endpoint_b;
    f.responder = initiator_is_a ? st.key.endpoint_b : st.key.endpoint_a;
    f.first_ts = st.first_ts;
    f.last_ts = st.last_ts;
    f.packets.reserve(st.packets.size());

    bool have_first_request = false;
    for (auto &[sender_is_a, pkt] : st.packets) {
        Direction dir = (sender_is_a == initiator_is_a) ? Direction::request : Direction::response;
        if (dir == Direction::request && !have_first_request) {
            f.request_ip_ttl_first = pkt.ip_ttl;
            f.request_traffic_mode = pkt.traffic_mode;
            f.initiator_mac = pkt.src_mac;
            have_first_request = true;
        }
        f.packets.push_back(FlowPacket{dir, std::move(pkt)});
    }
    return f;
}

} // namespace

std::vector<Flow> assemble(std::span<const ParsedPacket> packets, const FlowConfig &config) {
    std::vector<ActiveFlow> states;
    std::map<FlowKey, size_t> active; // key -> index into states

    for (const ParsedPacket &p : packets) {
        auto keyed = flow_key(p);
        if (!keyed) continue;
        auto &[key, sender_is_a] = *keyed;

        size_t idx;
        auto it = active.find(key);
        if (it != active.end() &&
            p.ts.seconds() - states[it->second].last_ts.seconds() <= config.timeout_sec) {
            idx = it->second;
        } else {
            idx = states.size();
            states.push_back(ActiveFlow{});
            states[idx].key = key;
            states[idx].first_sender_is_a = sender_is_a;
            states[idx].first_ts = p.ts;
            active[key] = idx;
        }

        ActiveFlow &st = states[idx];
        st.last_ts = p.ts;
        if (p.is_tcp() && p.tcp_flags.syn() && !p.tcp_flags.ack() && !st.syn_sender_is_a) {
            st.syn_sender_is_a = sender_is_a;
        }

        ParsedPacket copy = p;
        size_t &acc = sender_is_a ? st.bytes_a : st.bytes_b;
        if (acc >= config.payload_cap) {
            copy.payload.clear();
        } else if (acc + copy.payload.size() > config.payload_cap) {
            copy.payload.resize(config.payload_cap - acc);
        }
        acc += copy.payload.size();
        st.packets.emplace_back(sender_is_a, std::move(copy));
    }

    std::vector<Flow> flows;
    flows.reserve(states.size());
    for (auto &st : states) {
        flows.push_back(finalize(std::move(st)));
    }
    return flows;
}

namespace {

PayloadStream udp_payload(const Flow &f, Direction d, size_t cap) {
    PayloadStream out;
    bool first = true;
    for (const auto &fp : f.packets) {
        if (fp.dir != d || fp.pkt.payload.empty()) continue;
        if (first) {
            out.first_packet_len = fp.pkt.payload.size();
            first = false;
        }
        size_t room = cap - std::min(cap, out.bytes.size());
        size_t take = std::min(room, fp.pkt.payload.size());
        out.bytes.insert(out.bytes.end(), fp.pkt.payload.begin(), fp.pkt.payload.begin() + static_cast<long>(take));
        if (take < fp.pkt.payload.size()) break;
    }
    return out;
}

PayloadStream tcp_payload(const Flow &f, Direction d, size_t cap) {
    PayloadStream out;

    // Relative-offset base: the SYN consumes one sequence number, so data
    // starts at ISN+1. Without a SYN the first data segment defines zero.
    std::optional<uint32_t> base;
    for (const auto &fp : f.packets) {
        if (fp.dir != d) continue;
        if (fp.pkt.tcp_flags.syn()) {
            base = fp.pkt.tcp_seq + 1;
            break;
        }
    }
    if (!base) {
        for (const auto &fp : f.packets) {
            if (fp.dir == d && !fp.pkt.payload.empty()) {
                base = fp.pkt.tcp_seq;
                break;
            }
        }
    }
    if (!base) return out;

    std::vector<uint8_t> buf(cap, 0);
    std::vector<bool> written(cap, false);
    size_t extent = 0;
    bool first = true;
    for (const auto &fp : f.packets) {
        if (fp.dir != d || fp.pkt.payload.empty()) continue;
        if (first) {
            out.first_packet_len = fp.pkt.payload.size();
            first = false;
        }
        auto rel = static_cast<int64_t>(static_cast<int32_t>(fp.pkt.tcp_seq - *base));
        for (size_t i = 0; i < fp.pkt.payload.size(); ++i) {
            int64_t pos = rel + static_cast<int64_t>(i);
            if (pos < 0 || pos >= static_cast<int64_t>(cap)) continue;
            auto upos = static_cast<size_t>(pos);
            if (!written[upos]) {
                buf[upos] = fp.pkt.payload[i];
                written[upos] = true;
            }
            extent = std::max(extent, upos + 1);
        }
    }

    size_t contiguous = 0;
    while (contiguous < extent && written[contiguous]) ++contiguous;
    out.gap_truncated = contiguous < extent;
    out.bytes.assign(buf.begin(), buf.begin() + static_cast<long>(contiguous));
    return out;
}

} // namespace

PayloadStream ordered_payload(const Flow &f, Direction d, const FlowConfig &config) {
    if (d == Direction::combined) {
        PayloadStream req = ordered_payload(f, Direction::request, config);
        PayloadStream resp = ordered_payload(f, Direction::response, config);
        PayloadStream out;
        out.bytes = std::move(req.bytes);
        out.bytes.insert(out.bytes.end(), resp.bytes.begin(), resp.bytes.end());
        out.gap_truncated = req.gap_truncated || resp.gap_truncated;
        out.first_packet_len = req.first_packet_len ? req.first_packet_len : resp.first_packet_len;
        return out;
    }
    if (f.is_tcp()) {
        return tcp_payload(f, d, config.payload_cap);
    }
    return udp_payload(f, d, config.payload_cap);
}

} // namespace protoscan
