#include "protoscan/attributes.hpp"

namespace protoscan {

bool has_extractor(std::string_view protocol) {
    return protocol == "TLS" || protocol == "HTTP" || protocol == "DNS" || protocol == "NTP" ||
           protocol == "DHCP" || protocol == "SSDP";
}

std::optional<AttributeBundle> extract_attributes(std::string_view protocol, const Flow &f,
                                                  const ExtractOptions &options) {
    if (protocol == "TLS") {
        if (auto a = extract_tls(f, options.flow)) return AttributeBundle{std::move(*a)};
        return std::nullopt;
    }
    if (protocol == "HTTP") {
        HttpExtractOptions ho{options.redact_credentials};
        if (auto a = extract_http(f, ho, options.flow)) return AttributeBundle{HttpAttributes{std::move(*a)}};
        return std::nullopt;
    }
    if (protocol == "DNS") {
        if (auto a = extract_dns(f, options.flow)) return AttributeBundle{std::move(*a)};
        return std::nullopt;
    }
    if (protocol == "NTP") {
        if (auto a = extract_ntp(f, options.flow)) return AttributeBundle{std::move(*a)};
        return std::nullopt;
    }
    if (protocol == "DHCP") {
        if (auto a = extract_dhcp(f, options.flow)) return AttributeBundle{std::move(*a)};
        return std::nullopt;
    }
    if (protocol == "SSDP") {
        if (auto a = extract_ssdp(f, options.flow)) return AttributeBundle{std::move(*a)};
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace protoscan
