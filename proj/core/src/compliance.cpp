#include "protoscan/compliance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "protoscan/bytes.hpp"

namespace protoscan {

std::string_view to_string(CipherCategory c) {
    switch (c) {
    case CipherCategory::insecure: return "insecure";
    case CipherCategory::weak: return "weak";
    case CipherCategory::secure: return "secure";
    case CipherCategory::recommended: return "recommended";
    case CipherCategory::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(FindingSeverity s) {
    switch (s) {
    case FindingSeverity::vulnerable: return "vulnerable";
    case FindingSeverity::caution: return "caution";
    case FindingSeverity::info: return "info";
    }
    return "info";
}

namespace {

std::optional<CipherCategory> category_from_string(std::string_view s) {
    if (s == "insecure") return CipherCategory::insecure;
    if (s == "weak") return CipherCategory::weak;
    if (s == "secure") return CipherCategory::secure;
    if (s == "recommended") return CipherCategory::recommended;
    return std::nullopt;
}

std::string strip(const std::string &s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string hex_code(uint16_t code) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%04x", code);
    return buf;
}

std::string tls_version_name(TlsVersion v) {
    if (v == TlsVersion{3, 1}) return "TLS 1.0";
    if (v == TlsVersion{3, 2}) return "TLS 1.1";
    if (v == TlsVersion{3, 3}) return "TLS 1.2";
    if (v == TlsVersion{3, 4}) return "TLS 1.3";
    if (v == TlsVersion{3, 0}) return "SSL 3.0";
    return std::to_string(v.first) + "." + std::to_string(v.second);
}

std::string http_version_name(HttpVersion v) {
    return "HTTP/" + std::to_string(v.first) + "." + std::to_string(v.second);
}

} // namespace

CipherRegistry CipherRegistry::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw RegistryError("cannot open cipher registry " + path.string());

    CipherRegistry reg;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            size_t pos = s.find("snapshot-date:");
            if (pos != std::string::npos) {
                reg.snapshot_date_ = strip(s.substr(pos + 14));
            }
            continue;
        }
        size_t comma = s.find(',');
        if (comma == std::string::npos) {
            throw RegistryError(path.string() + ":" + std::to_string(lineno) + ": expected hex_code,category");
        }
        std::string code_text = strip(s.substr(0, comma));
        std::string cat_text = strip(s.substr(comma + 1));
        uint16_t code;
        try {
            auto bytes = from_hex(code_text);
            if (bytes.size() != 2) throw std::invalid_argument("cipher codes are 16-bit");
            code = be16(bytes.data());
        } catch (const std::invalid_argument &ex) {
            throw RegistryError(path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
        }
        auto cat = category_from_string(cat_text);
        if (!cat) {
            throw RegistryError(path.string() + ":" + std::to_string(lineno) + ": unknown category \"" +
                                cat_text + "\"");
        }
        auto [it, inserted] = reg.categories_.emplace(code, *cat);
        if (!inserted && it->second != *cat) {
            throw RegistryError(path.string() + ":" + std::to_string(lineno) + ": code " + code_text +
                                " already listed with category " + std::string(to_string(it->second)));
        }
    }
    return reg;
}

CipherRegistry CipherRegistry::from_pairs(const std::vector<std::pair<uint16_t, CipherCategory>> &pairs) {
    CipherRegistry reg;
    for (auto [code, cat] : pairs) {
        auto [it, inserted] = reg.categories_.emplace(code, cat);
        if (!inserted && it->second != cat) {
            throw RegistryError("code " + hex_code(code) + " listed with conflicting categories");
        }
    }
    return reg;
}

CipherCategory CipherRegistry::category(uint16_t code) const {
    auto it = categories_.find(code);
    return it == categories_.end() ? CipherCategory::unknown : it->second;
}

std::map<CipherCategory, size_t> CipherRegistry::counts() const {
    std::map<CipherCategory, size_t> out;
    for (const auto &[code, cat] : categories_) ++out[cat];
    return out;
}

const std::vector<RuleInfo> &rule_table() {
    static const std::vector<RuleInfo> table = {
        {"TLS.CLIENT_VERSION_DEPRECATED", FindingSeverity::vulnerable, 100,
         "client hello offers a TLS version below 1.2"},
        {"TLS.SERVER_VERSION_DEPRECATED", FindingSeverity::vulnerable, 90,
         "server selected a TLS version below 1.2"},
        {"TLS.CLIENT_OFFERS_INSECURE", FindingSeverity::vulnerable, 85,
         "client offers insecure cipher codes"},
        {"TLS.SERVER_SELECTED_INSECURE", FindingSeverity::vulnerable, 88,
         "server selected an insecure cipher code"},
        {"TLS.SERVER_SELECTED_WEAK", FindingSeverity::vulnerable, 80,
         "server selected a weak cipher code"},
        {"TLS.CLIENT_OFFERS_WEAK", FindingSeverity::caution, 50, "client offers weak cipher codes"},
        {"TLS.SERVER_SELECTED_UNKNOWN", FindingSeverity::info, 10,
         "server selected a cipher code the registry does not list"},
        {"HTTP.VERSION_OBSOLETE", FindingSeverity::vulnerable, 90,
         "HTTP version 1.0 or older in use"},
        {"HTTP.BASIC_AUTH", FindingSeverity::vulnerable, 85, "Basic authentication scheme in use"},
        {"HTTP.PLAINTEXT_CREDENTIAL", FindingSeverity::caution, 50,
         "credential transmitted without a digest scheme"},
        {"NTP.CLIENT_OLD_VERSION", FindingSeverity::vulnerable, 90, "NTP client version below 4"},
        {"NTP.SERVER_OLD_VERSION", FindingSeverity::vulnerable, 60, "NTP server version below 4"},
        {"NTP.ZERO_ORG", FindingSeverity::vulnerable, 80,
         "server response carries an all-zero origin timestamp"},
        {"NTP.BAD_MODES", FindingSeverity::caution, 40,
         "association modes other than client=3/server=4"},
        {"SSDP.TTL_EXCESSIVE", FindingSeverity::vulnerable, 80,
         "multicast request TTL above the recommended 2"},
        {"SSDP.BAD_NTS", FindingSeverity::caution, 40, "notification sub-type outside the accepted set"},
        {"SSDP.BAD_ST", FindingSeverity::caution, 40, "M-SEARCH search target is not ssdp:discover"},
        {"TLS.PARTIAL_MATCH", FindingSeverity::info, 5, "signature matched, mandatory attributes missing"},
        {"HTTP.PARTIAL_MATCH", FindingSeverity::info, 5, "signature matched, mandatory attributes missing"},
        {"DNS.PARTIAL_MATCH", FindingSeverity::info, 5, "signature matched, mandatory attributes missing"},
        {"NTP.PARTIAL_MATCH", FindingSeverity::info, 5, "signature matched, mandatory attributes missing"},
        {"DHCP.PARTIAL_MATCH", FindingSeverity::info, 5, "signature matched, mandatory attributes missing"},
        {"SSDP.PARTIAL_MATCH", FindingSeverity::info, 5, "signature matched, mandatory attributes missing"},
    };
    return table;
}

const RuleInfo *find_rule(std::string_view id) {
    for (const auto &r : rule_table()) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

namespace {

ComplianceFinding make_finding(std::string_view rule_id, std::string detail,
                               std::map<std::string, std::string> evidence) {
    const RuleInfo *info = find_rule(rule_id);
    ComplianceFinding f;
    f.rule_id = std::string(rule_id);
    f.severity = info ? info->severity : FindingSeverity::info;
    f.detail = std::move(detail);
    f.evidence = std::move(evidence);
    return f;
}

std::string join_codes(const std::vector<uint16_t> &codes) {
    std::string out;
    for (uint16_t c : codes) {
        if (!out.empty()) out += " ";
        out += hex_code(c);
    }
    return out;
}

} // namespace

std::vector<ComplianceFinding> check_tls(const TlsAttributes &a, const CipherRegistry &r) {
    std::vector<ComplianceFinding> out;
    const TlsVersion min_ok{3, 3};

    if (a.client_hello_version < min_ok) {
        out.push_back(make_finding("TLS.CLIENT_VERSION_DEPRECATED",
                                   "client hello presents " + tls_version_name(a.client_hello_version),
                                   {{"client-hello-version", tls_version_name(a.client_hello_version)}}));
    }
    if (a.server_hello_seen && a.server_hello_version < min_ok) {
        out.push_back(make_finding("TLS.SERVER_VERSION_DEPRECATED",
                                   "server chose " + tls_version_name(a.server_hello_version),
                                   {{"server-hello-version", tls_version_name(a.server_hello_version)}}));
    }

    std::vector<uint16_t> weak, insecure;
    for (uint16_t code : a.client_cipher_suites) {
        CipherCategory cat = r.category(code);
        if (cat == CipherCategory::weak) weak.push_back(code);
        else if (cat == CipherCategory::insecure) insecure.push_back(code);
    }
    if (!weak.empty()) {
        out.push_back(make_finding("TLS.CLIENT_OFFERS_WEAK",
                                   std::to_string(weak.size()) + " weak code(s) in the client offer",
                                   {{"weak-codes", join_codes(weak)}}));
    }
    if (!insecure.empty()) {
        out.push_back(make_finding("TLS.CLIENT_OFFERS_INSECURE",
                                   std::to_string(insecure.size()) + " insecure code(s) in the client offer",
                                   {{"insecure-codes", join_codes(insecure)}}));
    }

    if (a.server_hello_seen) {
        CipherCategory cat = r.category(a.server_selected_cipher);
        std::map<std::string, std::string> ev{
            {"server-selected-cipher", hex_code(a.server_selected_cipher)}};
        if (cat == CipherCategory::weak) {
            out.push_back(make_finding("TLS.SERVER_SELECTED_WEAK",
                                       "server selected weak code " + hex_code(a.server_selected_cipher), ev));
        } else if (cat == CipherCategory::insecure) {
            out.push_back(make_finding("TLS.SERVER_SELECTED_INSECURE",
                                       "server selected insecure code " + hex_code(a.server_selected_cipher),
                                       ev));
        } else if (cat == CipherCategory::unknown) {
            out.push_back(make_finding("TLS.SERVER_SELECTED_UNKNOWN",
                                       "registry does not list code " + hex_code(a.server_selected_cipher),
                                       ev));
        }
    }
    return out;
}

std::vector<ComplianceFinding> check_http(const HttpExchange &e) {
    std::vector<ComplianceFinding> out;
    const HttpVersion v10{1, 0};

    bool req_old = e.request_version <= v10;
    bool resp_old = e.has_response && e.response_version <= v10;
    if (req_old || resp_old) {
        HttpVersion offending = req_old ? e.request_version : e.response_version;
        std::string detail = offending == HttpVersion{0, 9}
                                 ? "deprecated HTTP/0.9 in use"
                                 : http_version_name(offending) + " in use";
        out.push_back(make_finding("HTTP.VERSION_OBSOLETE", detail,
                                   {{req_old ? "request-version" : "response-version",
                                     http_version_name(offending)}}));
    }
    if (e.auth_type == HttpAuthType::basic) {
        out.push_back(make_finding("HTTP.BASIC_AUTH", "Basic authentication on " + e.method + " " + e.uri,
                                   {{"authentication-type", "basic"}}));
    }
    if (!e.auth_credential.empty() && e.auth_type != HttpAuthType::digest &&
        e.auth_type != HttpAuthType::none) {
        out.push_back(make_finding("HTTP.PLAINTEXT_CREDENTIAL",
                                   "credential sent with non-digest scheme",
                                   {{"authentication-type", std::string(to_string(e.auth_type))}}));
    }
    return out;
}

std::vector<ComplianceFinding> check_ntp(const NtpAttributes &a) {
    std::vector<ComplianceFinding> out;
    if (a.client_version < 4) {
        out.push_back(make_finding("NTP.CLIENT_OLD_VERSION",
                                   "client uses NTP v" + std::to_string(a.client_version),
                                   {{"client-version", std::to_string(a.client_version)}}));
    }
    if (a.server_seen && a.server_version < 4) {
        out.push_back(make_finding("NTP.SERVER_OLD_VERSION",
                                   "server uses NTP v" + std::to_string(a.server_version),
                                   {{"server-version", std::to_string(a.server_version)}}));
    }
    if (a.client_mode != 3 || (a.server_seen && a.server_mode != 4)) {
        out.push_back(make_finding("NTP.BAD_MODES",
                                   "modes are client=" + std::to_string(a.client_mode) +
                                       (a.server_seen ? " server=" + std::to_string(a.server_mode) : ""),
                                   {{"client-mode", std::to_string(a.client_mode)}}));
    }
    if (a.server_seen && a.server_org_zero) {
        out.push_back(make_finding("NTP.ZERO_ORG", "server response has an all-zero origin timestamp",
                                   {{"server-org", "0"}}));
    }
    return out;
}

namespace {

std::string_view strip_quotes(std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

} // namespace

std::vector<ComplianceFinding> check_ssdp(const SsdpAttributes &a) {
    static const std::set<std::string, std::less<>> accepted_nts = {
        "ssdp:alive", "ssdp:byebye", "ssdp:update", "upnp:propchange"};

    std::vector<ComplianceFinding> out;
    if (a.message_kind == SsdpKind::notify && !accepted_nts.count(strip_quotes(a.nts))) {
        out.push_back(make_finding("SSDP.BAD_NTS", "notification sub-type \"" + a.nts + "\" not accepted",
                                   {{"nts", a.nts}}));
    }
    if (a.message_kind == SsdpKind::msearch && strip_quotes(a.st) != "ssdp:discover") {
        out.push_back(make_finding("SSDP.BAD_ST", "search target \"" + a.st + "\" is not ssdp:discover",
                                   {{"st", a.st}}));
    }
    if (a.multicast && a.message_kind != SsdpKind::response && a.ip_ttl > 2) {
        out.push_back(make_finding("SSDP.TTL_EXCESSIVE",
                                   "multicast request TTL " + std::to_string(a.ip_ttl) + " exceeds 2",
                                   {{"ip-ttl", std::to_string(a.ip_ttl)}}));
    }
    return out;
}

std::vector<ComplianceFinding> check_flow(const Detection &d, const std::optional<AttributeBundle> &attrs,
                                          const CipherRegistry &r) {
    std::vector<ComplianceFinding> out;
    if (!attrs) {
        if (has_extractor(d.protocol)) {
            out.push_back(make_finding(d.protocol + ".PARTIAL_MATCH",
                                       "signature matched but mandatory attributes are missing", {}));
        }
    } else if (d.protocol == "TLS") {
        if (!std::holds_alternative<TlsAttributes>(*attrs)) throw std::logic_error("TLS detection with non-TLS attributes");
        out = check_tls(std::get<TlsAttributes>(*attrs), r);
    } else if (d.protocol == "HTTP") {
        if (!std::holds_alternative<HttpAttributes>(*attrs)) throw std::logic_error("HTTP detection with non-HTTP attributes");
        for (const auto &e : std::get<HttpAttributes>(*attrs).exchanges) {
            auto f = check_http(e);
            out.insert(out.end(), f.begin(), f.end());
        }
    } else if (d.protocol == "DNS") {
        if (!std::holds_alternative<DnsAttributes>(*attrs)) throw std::logic_error("DNS detection with non-DNS attributes");
        // No DNS rules at present; adherence observed in practice.
    } else if (d.protocol == "NTP") {
        if (!std::holds_alternative<NtpAttributes>(*attrs)) throw std::logic_error("NTP detection with non-NTP attributes");
        out = check_ntp(std::get<NtpAttributes>(*attrs));
    } else if (d.protocol == "DHCP") {
        if (!std::holds_alternative<DhcpAttributes>(*attrs)) throw std::logic_error("DHCP detection with non-DHCP attributes");
        // No DHCP rules at present.
    } else if (d.protocol == "SSDP") {
        if (!std::holds_alternative<SsdpAttributes>(*attrs)) throw std::logic_error("SSDP detection with non-SSDP attributes");
        out = check_ssdp(std::get<SsdpAttributes>(*attrs));
    }

    // One finding per rule per flow.
    std::set<std::string> seen;
    std::vector<ComplianceFinding> unique;
    for (auto &f : out) {
        if (!seen.insert(f.rule_id).second) continue;
        f.flow_index = d.flow_index;
        f.protocol = d.protocol;
        unique.push_back(std::move(f));
    }
    return unique;
}

} // namespace protoscan
