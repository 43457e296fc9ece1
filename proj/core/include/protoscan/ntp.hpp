#ifndef PROTOSCAN_NTP_HPP
#define PROTOSCAN_NTP_HPP

#include <cstdint>
#include <optional>

#include "protoscan/flow.hpp"

namespace protoscan {

struct NtpAttributes {
    uint8_t client_version = 0; // VN bits of the first request packet
    uint8_t client_mode = 0;

    bool server_seen = false;
    uint8_t server_version = 0;
    uint8_t server_mode = 0;
    bool server_org_zero = false; // origin timestamp all-zero in the response
};

// First byte layout is LI:2 | VN:3 | Mode:3. The origin timestamp sits at
// offset 24, length 8. Packets shorter than the 48-byte base format fail
// extraction.
std::optional<NtpAttributes> extract_ntp(const Flow &f, const FlowConfig &config = {});

} // namespace protoscan

#endif
