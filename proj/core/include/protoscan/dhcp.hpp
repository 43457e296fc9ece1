#ifndef PROTOSCAN_DHCP_HPP
#define PROTOSCAN_DHCP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "protoscan/flow.hpp"

namespace protoscan {

struct DhcpAttributes {
    uint8_t op = 0; // 1 = request (BOOTREQUEST), 2 = reply (BOOTREPLY)
    bool magic_cookie_ok = false;
    std::optional<uint8_t> message_type;          // option 53
    std::vector<uint8_t> parameter_request_list;  // option 55, order preserved
    std::string requested_hostname;               // option 12

    bool is_request() const { return op == 1; }
};

// Fixed BOOTP layout, then option TLVs up to the end marker (255). Options
// are only parsed when the magic cookie checks out. Payloads shorter than
// the 240-byte fixed part fail extraction.
std::optional<DhcpAttributes> extract_dhcp(const Flow &f, const FlowConfig &config = {});

} // namespace protoscan

#endif
