#include "protoscan/ssdp.hpp"

#include <cctype>

namespace protoscan {

std::string_view to_string(SsdpKind k) {
    switch (k) {
    case SsdpKind::notify: return "notify";
    case SsdpKind::msearch: return "msearch";
    case SsdpKind::response: return "response";
    }
    return "notify";
}

namespace {

bool istarts_with(std::string_view text, std::string_view prefix) {
    if (text.size() < prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(text[i])) !=
            std::toupper(static_cast<unsigned char>(prefix[i])))
            return false;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

std::optional<SsdpAttributes> extract_ssdp(const Flow &f, const FlowConfig &config) {
    PayloadStream req = ordered_payload(f, Direction::request, config);
    if (req.bytes.empty()) return std::nullopt;
    std::string_view text(reinterpret_cast<const char *>(req.bytes.data()), req.bytes.size());

    SsdpAttributes attrs;
    attrs.ip_ttl = f.request_ip_ttl_first;
    attrs.multicast = f.request_traffic_mode == TrafficMode::multicast;

    if (istarts_with(text, "NOTIFY ")) attrs.message_kind = SsdpKind::notify;
    else if (istarts_with(text, "M-SEARCH ")) attrs.message_kind = SsdpKind::msearch;
    else if (istarts_with(text, "HTTP/")) attrs.message_kind = SsdpKind::response;
    else return std::nullopt;

    size_t pos = text.find('\n');
    while (pos != std::string_view::npos && pos + 1 < text.size()) {
        size_t start = pos + 1;
        size_t end = text.find('\n', start);
        std::string_view line =
            end == std::string_view::npos ? text.substr(start) : text.substr(start, end - start);
        pos = end;
        line = trim(line);
        if (line.empty()) break;
        size_t colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        std::string_view name = trim(line.substr(0, colon));
        std::string_view value = trim(line.substr(colon + 1));
        if (name.size() == 2 && istarts_with(name, "NT")) attrs.nt = std::string(value);
        else if (name.size() == 3 && istarts_with(name, "NTS")) attrs.nts = std::string(value);
        else if (name.size() == 2 && istarts_with(name, "ST")) attrs.st = std::string(value);
        else if (name.size() == 3 && istarts_with(name, "USN")) attrs.usn = std::string(value);
    }

    if (attrs.message_kind == SsdpKind::notify && attrs.nts.empty()) return std::nullopt;
    if (attrs.message_kind == SsdpKind::msearch && attrs.st.empty()) return std::nullopt;
    return attrs;
}

} // namespace protoscan
