#include "protoscan/http.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace protoscan {

std::string_view to_string(HttpAuthType t) {
    switch (t) {
    case HttpAuthType::none: return "none";
    case HttpAuthType::basic: return "basic";
    case HttpAuthType::digest: return "digest";
    case HttpAuthType::bearer: return "bearer";
    case HttpAuthType::other: return "other";
    }
    return "none";
}

std::string redact_credential(std::string_view credential) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : credential) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "redacted:fnv1a=%016llx,len=%zu",
                  static_cast<unsigned long long>(h), credential.size());
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

// Reads one text line (up to LF); returns false at end of input.
bool next_line(std::string_view text, size_t &pos, std::string_view &line) {
    if (pos >= text.size()) return false;
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
        line = text.substr(pos);
        pos = text.size();
    } else {
        line = text.substr(pos, nl - pos);
        pos = nl + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return true;
}

bool parse_version_token(std::string_view tok, HttpVersion &v) {
    if (tok.size() != 8 || tok.substr(0, 5) != "HTTP/") return false;
    if (!std::isdigit(static_cast<unsigned char>(tok[5])) || tok[6] != '.' ||
        !std::isdigit(static_cast<unsigned char>(tok[7])))
        return false;
    v = {tok[5] - '0', tok[7] - '0'};
    return true;
}

bool is_method_token(std::string_view tok) {
    if (tok.empty() || tok.size() > 20) return false;
    for (char c : tok) {
        if (!(std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
              c == '-' || c == '_'))
            return false;
    }
    return true;
}

struct RequestLine {
    std::string_view method;
    std::string_view uri;
    HttpVersion version{0, 9}; // bare two-token form is HTTP/0.9
};

bool parse_request_line(std::string_view line, RequestLine &out) {
    size_t sp1 = line.find(' ');
    if (sp1 == std::string_view::npos || sp1 == 0) return false;
    std::string_view method = line.substr(0, sp1);
    if (!is_method_token(method)) return false;
    std::string_view rest = line.substr(sp1 + 1);
    size_t sp2 = rest.rfind(' ');
    if (sp2 == std::string_view::npos) {
        // HTTP/0.9 simple request: "GET /path"
        if (rest.empty()) return false;
        out = {method, rest, {0, 9}};
        return true;
    }
    HttpVersion v;
    if (!parse_version_token(rest.substr(sp2 + 1), v)) return false;
    std::string_view uri = rest.substr(0, sp2);
    if (uri.empty()) return false;
    out = {method, uri, v};
    return true;
}

struct StatusLine {
    HttpVersion version;
    int code;
    std::string_view phrase;
};

bool parse_status_line(std::string_view line, StatusLine &out) {
    size_t sp1 = line.find(' ');
    if (sp1 == std::string_view::npos) return false;
    if (!parse_version_token(line.substr(0, sp1), out.version)) return false;
    std::string_view rest = line.substr(sp1 + 1);
    if (rest.size() < 3) return false;
    int code = 0;
    for (int i = 0; i < 3; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(rest[i]))) return false;
        code = code * 10 + (rest[i] - '0');
    }
    if (code < 100 || code > 599) return false;
    out.code = code;
    out.phrase = rest.size() > 4 ? trim(rest.substr(4)) : std::string_view{};
    if (rest.size() > 3 && rest[3] != ' ') return false;
    return true;
}

struct Headers {
    std::string host, user_agent, server, authorization;
    std::optional<size_t> content_length;
};

// Consumes header lines up to the first empty line.
void parse_headers(std::string_view text, size_t &pos, Headers &h) {
    std::string_view line;
    while (next_line(text, pos, line)) {
        if (line.empty()) break;
        size_t colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        std::string_view name = trim(line.substr(0, colon));
        std::string_view value = trim(line.substr(colon + 1));
        if (iequals(name, "host")) h.host = std::string(value);
        else if (iequals(name, "user-agent")) h.user_agent = std::string(value);
        else if (iequals(name, "server")) h.server = std::string(value);
        else if (iequals(name, "authorization")) h.authorization = std::string(value);
        else if (iequals(name, "content-length")) {
            size_t n = 0;
            bool ok = !value.empty();
            for (char c : value) {
                if (!std::isdigit(static_cast<unsigned char>(c))) {
                    ok = false;
                    break;
                }
                n = n * 10 + static_cast<size_t>(c - '0');
            }
            if (ok) h.content_length = n;
        }
    }
}

void skip_body(std::string_view text, size_t &pos, const Headers &h, bool (*is_start)(std::string_view)) {
    if (h.content_length) {
        pos = std::min(text.size(), pos + *h.content_length);
        return;
    }
    // No length header: resynchronize on the next plausible start-line.
    size_t probe = pos;
    std::string_view line;
    while (probe < text.size()) {
        size_t line_start = probe;
        if (!next_line(text, probe, line)) break;
        if (is_start(line)) {
            pos = line_start;
            return;
        }
    }
    pos = text.size();
}

bool is_request_start(std::string_view line) {
    RequestLine rl;
    return parse_request_line(line, rl);
}

bool is_status_start(std::string_view line) {
    StatusLine sl;
    return parse_status_line(line, sl);
}

void apply_auth(HttpExchange &ex, const Headers &h, const HttpExtractOptions &options) {
    if (h.authorization.empty()) return;
    std::string_view auth = h.authorization;
    size_t sp = auth.find(' ');
    std::string_view scheme = sp == std::string_view::npos ? auth : auth.substr(0, sp);
    std::string_view cred = sp == std::string_view::npos ? std::string_view{} : trim(auth.substr(sp + 1));
    if (iequals(scheme, "basic")) ex.auth_type = HttpAuthType::basic;
    else if (iequals(scheme, "digest")) ex.auth_type = HttpAuthType::digest;
    else if (iequals(scheme, "bearer")) ex.auth_type = HttpAuthType::bearer;
    else ex.auth_type = HttpAuthType::other;
    ex.auth_credential = options.redact_credentials ? redact_credential(cred) : std::string(cred);
}

} // namespace

std::optional<std::vector<HttpExchange>> extract_http(const Flow &f, const HttpExtractOptions &options,
                                                      const FlowConfig &config) {
    PayloadStream req_stream = ordered_payload(f, Direction::request, config);
    std::string_view req_text(reinterpret_cast<const char *>(req_stream.bytes.data()),
                              req_stream.bytes.size());

    std::vector<HttpExchange> exchanges;
    size_t pos = 0;
    std::string_view line;
    while (pos < req_text.size()) {
        size_t line_start = pos;
        if (!next_line(req_text, pos, line)) break;
        RequestLine rl;
        if (!parse_request_line(line, rl)) {
            if (exchanges.empty()) return std::nullopt; // stream does not begin with a request
            pos = line_start;
            break;
        }
        HttpExchange ex;
        ex.method = std::string(rl.method);
        ex.uri = std::string(rl.uri);
        ex.request_version = rl.version;
        if (rl.version != HttpVersion{0, 9}) {
            Headers h;
            parse_headers(req_text, pos, h);
            ex.host = h.host;
            ex.user_agent = h.user_agent;
            apply_auth(ex, h, options);
            skip_body(req_text, pos, h, &is_request_start);
        }
        exchanges.push_back(std::move(ex));
    }
    if (exchanges.empty()) return std::nullopt;

    PayloadStream resp_stream = ordered_payload(f, Direction::response, config);
    std::string_view resp_text(reinterpret_cast<const char *>(resp_stream.bytes.data()),
                               resp_stream.bytes.size());
    pos = 0;
    size_t index = 0;
    while (pos < resp_text.size() && index < exchanges.size()) {
        if (!next_line(resp_text, pos, line)) break;
        StatusLine sl;
        if (!parse_status_line(line, sl)) break;
        HttpExchange &ex = exchanges[index++];
        ex.has_response = true;
        ex.response_version = sl.version;
        ex.status_code = sl.code;
        ex.response_phrase = std::string(sl.phrase);
        Headers h;
        parse_headers(resp_text, pos, h);
        ex.server_header = h.server;
        skip_body(resp_text, pos, h, &is_status_start);
    }
    return exchanges;
}

} // namespace protoscan
