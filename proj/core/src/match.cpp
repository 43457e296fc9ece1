#include "protoscan/match.hpp"

#include <algorithm>
#include <map>

namespace protoscan {

std::string_view to_string(Confidence c) {
    return c == Confidence::full ? "full" : "partial";
}

namespace {

bool run_string(const StringPattern &sp, std::span<const uint8_t> payload) {
    const std::regex *re = sp.compiled.get();
    std::regex local;
    if (!re) {
        StringPattern copy = sp;
        if (!copy.compile()) return false;
        local = *copy.compiled;
        re = &local;
    }
    const char *begin = reinterpret_cast<const char *>(payload.data());
    return std::regex_search(begin, begin + payload.size(), *re);
}

bool run_bytes(const std::vector<BytePatternEntry> &entries, std::span<const uint8_t> payload) {
    if (entries.empty()) return false;
    for (const auto &e : entries) {
        if (e.mask.size() != e.value.size()) return false;
        if (e.offset + e.value.size() > payload.size()) return false;
        for (size_t i = 0; i < e.value.size(); ++i) {
            if ((payload[e.offset + i] & e.mask[i]) != (e.value[i] & e.mask[i])) return false;
        }
    }
    return true;
}

bool compare(double lhs, StatComparator cmp, double rhs) {
    switch (cmp) {
    case StatComparator::lt: return lhs < rhs;
    case StatComparator::le: return lhs <= rhs;
    case StatComparator::gt: return lhs > rhs;
    case StatComparator::ge: return lhs >= rhs;
    case StatComparator::eq: return lhs == rhs;
    case StatComparator::ne: return lhs != rhs;
    }
    return false;
}

bool run_stat(const StatPattern &sp, DirectionView view) {
    switch (sp.metric) {
    case StatMetric::printable_ratio: {
        size_t window = std::min<size_t>(view.stream.size(), 64);
        if (window == 0) return false;
        size_t printable = 0;
        for (size_t i = 0; i < window; ++i) {
            uint8_t b = view.stream[i];
            if ((b >= 0x20 && b < 0x7f) || b == '\t' || b == '\r' || b == '\n') ++printable;
        }
        return compare(static_cast<double>(printable) / static_cast<double>(window), sp.comparator,
                       sp.threshold);
    }
    case StatMetric::payload_length:
        return compare(static_cast<double>(view.first_packet_len), sp.comparator, sp.threshold);
    }
    return false;
}

} // namespace

bool run_matcher(const Matcher &m, DirectionView view) {
    if (view.stream.empty()) return false;
    switch (m.type()) {
    case MatcherType::string_pattern:
        return run_string(std::get<StringPattern>(m.pattern), view.stream);
    case MatcherType::byte_pattern:
        return run_bytes(std::get<std::vector<BytePatternEntry>>(m.pattern), view.stream);
    case MatcherType::statistical:
        return run_stat(std::get<StatPattern>(m.pattern), view);
    }
    return false;
}

bool run_matcher(const Matcher &m, std::span<const uint8_t> payload) {
    return run_matcher(m, DirectionView{payload, payload.size()});
}

namespace {

bool direction_matches(const DirectionContents &dc, DirectionView view) {
    if (dc.matchers.empty()) return false;
    std::map<std::string, bool> truth;
    for (const auto &m : dc.matchers) truth[m.id] = run_matcher(m, view);
    if (dc.eval_source.empty()) {
        for (const auto &[id, v] : truth) {
            if (!v) return false;
        }
        return true;
    }
    BoolExpr expr = dc.eval.empty() ? BoolExpr::parse(dc.eval_source) : dc.eval;
    return expr.eval(truth);
}

} // namespace

std::optional<Detection> apply_model(const ProtocolModel &m, const Flow &f, const FlowConfig &config) {
    const Contents &c = m.contents;
    if (!c.request && !c.response && !c.combined) return std::nullopt;

    std::map<std::string, bool> dir_truth;
    std::vector<Direction> matched;

    auto run_dir = [&](const std::optional<DirectionContents> &dc, Direction d) {
        if (!dc) return;
        PayloadStream stream = ordered_payload(f, d, config);
        DirectionView view{std::span<const uint8_t>(stream.bytes), stream.first_packet_len};
        bool hit = direction_matches(*dc, view);
        dir_truth[std::string(to_string(d))] = hit;
        if (hit) matched.push_back(d);
    };
    run_dir(c.request, Direction::request);
    run_dir(c.response, Direction::response);
    run_dir(c.combined, Direction::combined);

    bool selected;
    if (c.select_source.empty()) {
        selected = !matched.empty();
    } else {
        BoolExpr expr = c.select.empty() ? BoolExpr::parse(c.select_source) : c.select;
        selected = expr.eval(dir_truth);
    }
    if (!selected || matched.empty()) return std::nullopt;

    Detection det;
    det.protocol = m.info.abbreviation;
    det.matched_directions = std::move(matched);
    det.port_hint_agreed = std::find(m.metadata.server_ports.begin(), m.metadata.server_ports.end(),
                                     PortRef{f.ip_protocol(), f.responder.port}) !=
                           m.metadata.server_ports.end();
    det.confidence = Confidence::full;
    return det;
}

namespace {

bool traffic_mode_agrees(const ProtocolModel &m, const Flow &f) {
    switch (m.metadata.traffic_mode) {
    case TrafficModeHint::any: return true;
    case TrafficModeHint::unicast: return f.request_traffic_mode == TrafficMode::unicast;
    case TrafficModeHint::multicast: return f.request_traffic_mode == TrafficMode::multicast;
    case TrafficModeHint::broadcast: return f.request_traffic_mode == TrafficMode::broadcast;
    }
    return true;
}

bool has_byte_signature(const ProtocolModel &m) {
    for (const auto *dc : {&m.contents.request, &m.contents.response, &m.contents.combined}) {
        if (!dc->has_value()) continue;
        for (const auto &matcher : (*dc)->matchers) {
            if (matcher.type() == MatcherType::byte_pattern) return true;
        }
    }
    return false;
}

} // namespace

std::vector<Detection> detect_all(std::span<const ProtocolModel> models, const Flow &f,
                                  size_t flow_index, const FlowConfig &config) {
    struct Ranked {
        Detection det;
        int rank_tm;   // 0 = traffic-mode agrees
        int rank_spec; // 0 = model carries a byte signature
    };
    std::vector<Ranked> hits;
    for (const auto &m : models) {
        auto det = apply_model(m, f, config);
        if (!det) continue;
        det->flow_index = flow_index;
        hits.push_back(Ranked{std::move(*det), traffic_mode_agrees(m, f) ? 0 : 1,
                              has_byte_signature(m) ? 0 : 1});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Ranked &a, const Ranked &b) {
        auto key = [](const Ranked &r) {
            return std::make_tuple(r.det.confidence == Confidence::full ? 0 : 1,
                                   r.det.port_hint_agreed ? 0 : 1, r.rank_tm, r.rank_spec,
                                   r.det.protocol);
        };
        return key(a) < key(b);
    });
    std::vector<Detection> out;
    out.reserve(hits.size());
    for (auto &h : hits) out.push_back(std::move(h.det));
    return out;
}

} // namespace protoscan
