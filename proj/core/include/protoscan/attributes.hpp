#ifndef PROTOSCAN_ATTRIBUTES_HPP
#define PROTOSCAN_ATTRIBUTES_HPP

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "protoscan/dhcp.hpp"
#include "protoscan/dns.hpp"
#include "protoscan/flow.hpp"
#include "protoscan/http.hpp"
#include "protoscan/ntp.hpp"
#include "protoscan/ssdp.hpp"
#include "protoscan/tls.hpp"

namespace protoscan {

struct HttpAttributes {
    std::vector<HttpExchange> exchanges;
};

using AttributeBundle =
    std::variant<TlsAttributes, HttpAttributes, DnsAttributes, NtpAttributes, DhcpAttributes, SsdpAttributes>;

struct ExtractOptions {
    bool redact_credentials = true;
    FlowConfig flow;
};

// Dispatches to the per-protocol extractor for the shipped model
// abbreviations. nullopt means extraction failed (downgrading the flow's
// detection to partial) or the protocol has no extractor.
std::optional<AttributeBundle> extract_attributes(std::string_view protocol, const Flow &f,
                                                  const ExtractOptions &options = {});

bool has_extractor(std::string_view protocol);

} // namespace protoscan

#endif
