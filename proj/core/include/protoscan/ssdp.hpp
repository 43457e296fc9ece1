#ifndef PROTOSCAN_SSDP_HPP
#define PROTOSCAN_SSDP_HPP

#include <optional>
#include <string>

#include "protoscan/flow.hpp"

namespace protoscan {

enum class SsdpKind { notify, msearch, response };

std::string_view to_string(SsdpKind k);

struct SsdpAttributes {
    SsdpKind message_kind = SsdpKind::notify;
    std::string nt;
    std::string nts;
    std::string st;
    std::string usn;
    uint8_t ip_ttl = 0;    // from the flow's first request packet
    bool multicast = false;
};

// Classifies the start line of the first request-direction message and
// captures the NT/NTS/ST/USN headers (names matched case-insensitively).
// The kind's mandatory header must be present: NTS for NOTIFY, ST for
// M-SEARCH; otherwise extraction fails and the detection goes partial.
std::optional<SsdpAttributes> extract_ssdp(const Flow &f, const FlowConfig &config = {});

} // namespace protoscan

#endif
