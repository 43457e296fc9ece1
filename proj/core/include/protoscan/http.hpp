#ifndef PROTOSCAN_HTTP_HPP
#define PROTOSCAN_HTTP_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "protoscan/flow.hpp"

namespace protoscan {

enum class HttpAuthType { none, basic, digest, bearer, other };

std::string_view to_string(HttpAuthType t);

using HttpVersion = std::pair<int, int>;

struct HttpExchange {
    std::string method;
    std::string uri;
    HttpVersion request_version{0, 0};
    std::string host;
    std::string user_agent;
    HttpAuthType auth_type = HttpAuthType::none;
    std::string auth_credential; // redacted unless extraction opted out

    bool has_response = false;
    HttpVersion response_version{0, 0};
    int status_code = 0;
    std::string response_phrase;
    std::string server_header;
};

struct HttpExtractOptions {
    bool redact_credentials = true;
};

// Splits pipelined exchanges on the request stream and pairs the i-th
// request with the i-th response. Headers are parsed up to the first empty
// line; bodies are skipped via Content-Length when present, otherwise the
// scan resumes at the next plausible start-line.
std::optional<std::vector<HttpExchange>> extract_http(const Flow &f,
                                                      const HttpExtractOptions &options = {},
                                                      const FlowConfig &config = {});

// Stable credential redaction: FNV-1a hash plus the original length.
std::string redact_credential(std::string_view credential);

} // namespace protoscan

#endif
