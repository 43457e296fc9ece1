#ifndef PROTOSCAN_DNS_HPP
#define PROTOSCAN_DNS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "protoscan/flow.hpp"

namespace protoscan {

struct DnsAttributes {
    uint16_t transaction_id = 0;
    bool request_is_response = false; // QR bit of the request-direction message
    std::vector<std::string> query_names;
    std::vector<uint16_t> query_types;

    bool response_seen = false;
    bool response_is_response = false;
    uint8_t response_code = 0; // RCODE, valid when response_seen
};

// Decodes the first message of each direction: header bit-fields and the
// question section. Compression pointers are followed with a visited-offset
// set, so pointer loops fail cleanly instead of hanging.
std::optional<DnsAttributes> extract_dns(const Flow &f, const FlowConfig &config = {});

} // namespace protoscan

#endif
