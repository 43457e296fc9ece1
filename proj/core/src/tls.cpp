#include "protoscan/tls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "protoscan/bytes.hpp"

namespace protoscan {

namespace {

constexpr uint8_t kRecordHandshake = 22;
constexpr uint8_t kHandshakeClientHello = 1;
constexpr uint8_t kHandshakeServerHello = 2;
constexpr uint8_t kHandshakeCertificate = 11;

// Coalesces consecutive handshake-record payloads. Stops at the first
// non-handshake record (CCS or application data mark the end of cleartext
// handshake bytes) or at a record cut short by the capture.
struct RecordScan {
    std::vector<uint8_t> handshake;
    std::optional<TlsVersion> record_version;
};

RecordScan scan_records(std::span<const uint8_t> stream) {
    RecordScan out;
    ByteReader r(stream);
    while (r.remaining() >= 5) {
        uint8_t type = r.u8();
        uint8_t major = r.u8();
        uint8_t minor = r.u8();
        uint16_t len = r.u16be();
        if (type != kRecordHandshake) break;
        if (!out.record_version) out.record_version = TlsVersion{major, minor};
        if (r.remaining() < len) {
            // Truncated record: take what is there, then stop.
            auto part = r.bytes(r.remaining());
            out.handshake.insert(out.handshake.end(), part.begin(), part.end());
            break;
        }
        auto body = r.bytes(len);
        out.handshake.insert(out.handshake.end(), body.begin(), body.end());
    }
    return out;
}

struct HandshakeMsg {
    uint8_t type;
    std::span<const uint8_t> body;
};

std::vector<HandshakeMsg> split_messages(std::span<const uint8_t> handshake) {
    std::vector<HandshakeMsg> out;
    ByteReader r(handshake);
    while (r.remaining() >= 4) {
        uint8_t type = r.u8();
        uint32_t len = static_cast<uint32_t>(r.u8()) << 16;
        len |= r.u16be();
        if (r.remaining() < len) break;
        out.push_back({type, r.bytes(len)});
    }
    return out;
}

bool parse_extensions(ByteReader &r, std::vector<TlsExtension> &out, uint32_t &total) {
    if (r.remaining() < 2) {
        total = 0;
        return true; // extensions block absent: legal, zero extensions
    }
    uint16_t ext_len = r.u16be();
    total = ext_len;
    size_t end = r.position() + ext_len;
    while (r.position() + 4 <= end && r.remaining() >= 4) {
        uint16_t type = r.u16be();
        uint16_t len = r.u16be();
        if (r.remaining() < len || r.position() + len > end) return false;
        r.skip(len);
        out.push_back({type, len});
    }
    return r.position() == end;
}

bool parse_client_hello(std::span<const uint8_t> body, TlsAttributes &attrs) {
    try {
        ByteReader r(body);
        attrs.client_hello_version = {r.u8(), r.u8()};
        r.skip(32); // random
        uint8_t sid_len = r.u8();
        r.skip(sid_len);
        uint16_t cs_len = r.u16be();
        if (cs_len % 2 != 0) return false;
        for (int i = 0; i < cs_len / 2; ++i) attrs.client_cipher_suites.push_back(r.u16be());
        uint8_t comp_len = r.u8();
        r.skip(comp_len);
        return parse_extensions(r, attrs.client_extensions, attrs.client_extension_bytes);
    } catch (const std::out_of_range &) {
        return false;
    }
}

bool parse_server_hello(std::span<const uint8_t> body, TlsAttributes &attrs) {
    try {
        ByteReader r(body);
        attrs.server_hello_version = {r.u8(), r.u8()};
        r.skip(32);
        uint8_t sid_len = r.u8();
        r.skip(sid_len);
        attrs.server_selected_cipher = r.u16be();
        r.skip(1); // compression method
        attrs.server_hello_seen = true;
        return parse_extensions(r, attrs.server_extensions, attrs.server_extension_bytes);
    } catch (const std::out_of_range &) {
        return false;
    }
}

} // namespace

std::optional<TlsAttributes> extract_tls(const Flow &f, const FlowConfig &config) {
    TlsAttributes attrs;

    PayloadStream request = ordered_payload(f, Direction::request, config);
    RecordScan req_scan = scan_records(request.bytes);
    bool have_client_hello = false;
    for (const auto &msg : split_messages(req_scan.handshake)) {
        if (msg.type == kHandshakeClientHello) {
            have_client_hello = parse_client_hello(msg.body, attrs);
            break;
        }
    }
    if (!have_client_hello) return std::nullopt;
    if (req_scan.record_version) attrs.client_record_version = *req_scan.record_version;

    PayloadStream response = ordered_payload(f, Direction::response, config);
    RecordScan resp_scan = scan_records(response.bytes);
    if (resp_scan.record_version) attrs.server_record_version = *resp_scan.record_version;
    for (const auto &msg : split_messages(resp_scan.handshake)) {
        if (msg.type == kHandshakeServerHello && !attrs.server_hello_seen) {
            parse_server_hello(msg.body, attrs);
        } else if (msg.type == kHandshakeCertificate) {
            attrs.certificate_seen = true;
        }
    }

    if (attrs.server_hello_seen &&
        std::find(attrs.client_cipher_suites.begin(), attrs.client_cipher_suites.end(),
                  attrs.server_selected_cipher) == attrs.client_cipher_suites.end()) {
        attrs.selection_anomaly = true;
    }
    return attrs;
}

double cipher_plot_value(uint16_t code) {
    if (code == 0) {
        throw std::domain_error("cipher_plot_value: code 0 has no binary logarithm");
    }
    return std::log2(static_cast<double>(code));
}

} // namespace protoscan
