#ifndef PROTOSCAN_COMPLIANCE_HPP
#define PROTOSCAN_COMPLIANCE_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "protoscan/attributes.hpp"
#include "protoscan/match.hpp"

namespace protoscan {

enum class CipherCategory { insecure, weak, secure, recommended, unknown };

std::string_view to_string(CipherCategory c);

// Snapshot of the public cipher-suite classification. Lookups of codes the
// snapshot does not list come back as `unknown`.
class CipherRegistry {
public:
    CipherRegistry() = default;

    // CSV lines of `hex_code,category`, '#' comments; an optional
    // `# snapshot-date: YYYY-MM-DD` comment carries the snapshot date.
    // A code listed twice with conflicting categories is a load error.
    static CipherRegistry load(const std::filesystem::path &path);
    static CipherRegistry from_pairs(const std::vector<std::pair<uint16_t, CipherCategory>> &pairs);

    CipherCategory category(uint16_t code) const;
    std::map<CipherCategory, size_t> counts() const;
    size_t size() const { return categories_.size(); }
    const std::string &snapshot_date() const { return snapshot_date_; }

private:
    std::map<uint16_t, CipherCategory> categories_;
    std::string snapshot_date_;
};

class RegistryError : public std::runtime_error {
public:
    explicit RegistryError(const std::string &msg) : std::runtime_error(msg) {}
};

enum class FindingSeverity { vulnerable, caution, info };

std::string_view to_string(FindingSeverity s);

struct ComplianceFinding {
    size_t flow_index = 0;
    std::string protocol;
    std::string rule_id;
    FindingSeverity severity = FindingSeverity::info;
    std::string detail;
    std::map<std::string, std::string> evidence;
};

struct RuleInfo {
    std::string id;
    FindingSeverity severity;
    int weight; // report ordering within a severity; higher first
    std::string description;
};

// Every rule_id a finding may carry, including the per-protocol
// PARTIAL_MATCH markers emitted by the dispatcher.
const std::vector<RuleInfo> &rule_table();
const RuleInfo *find_rule(std::string_view id);

std::vector<ComplianceFinding> check_tls(const TlsAttributes &a, const CipherRegistry &r);
std::vector<ComplianceFinding> check_http(const HttpExchange &e);
std::vector<ComplianceFinding> check_ntp(const NtpAttributes &a);
std::vector<ComplianceFinding> check_ssdp(const SsdpAttributes &a);

// Dispatch by detection protocol. DNS and DHCP currently contribute no
// rules but flow through so rules can be added. A partial detection with
// no attributes yields the protocol's PARTIAL_MATCH info finding. Throws
// std::logic_error when attrs does not match the detection's protocol.
std::vector<ComplianceFinding> check_flow(const Detection &d, const std::optional<AttributeBundle> &attrs,
                                          const CipherRegistry &r);

} // namespace protoscan

#endif
