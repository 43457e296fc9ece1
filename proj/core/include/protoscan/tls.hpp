#ifndef PROTOSCAN_TLS_HPP
#define PROTOSCAN_TLS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "protoscan/flow.hpp"

namespace protoscan {

// (major, minor) as carried on the wire: TLS 1.0 = (3,1) ... TLS 1.3 = (3,4).
using TlsVersion = std::pair<uint8_t, uint8_t>;

struct TlsExtension {
    uint16_t type = 0;
    uint16_t data_length = 0;

    auto operator<=>(const TlsExtension &) const = default;
};

struct TlsAttributes {
    TlsVersion client_hello_version{0, 0};
    TlsVersion client_record_version{0, 0};
    std::vector<uint16_t> client_cipher_suites; // wire order, GREASE kept verbatim
    std::vector<TlsExtension> client_extensions;
    uint32_t client_extension_bytes = 0; // value of the extensions length field

    bool server_hello_seen = false;
    TlsVersion server_hello_version{0, 0};
    TlsVersion server_record_version{0, 0};
    uint16_t server_selected_cipher = 0;
    std::vector<TlsExtension> server_extensions;
    uint32_t server_extension_bytes = 0;
    bool certificate_seen = false;

    // Selected cipher absent from the client's offer; recorded, not fatal.
    bool selection_anomaly = false;
};

// Parses the handshake from the flow's ordered payload streams. Requires a
// ClientHello; everything on the server side is optional. Multi-record and
// cross-segment handshakes are handled by record-layer reassembly.
std::optional<TlsAttributes> extract_tls(const Flow &f, const FlowConfig &config = {});

// Fingerprint plot mapping: binary logarithm of the code's unsigned value.
// Throws std::domain_error for code 0.
double cipher_plot_value(uint16_t code);

} // namespace protoscan

#endif
