#ifndef PROTOSCAN_FINGERPRINT_HPP
#define PROTOSCAN_FINGERPRINT_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "protoscan/attributes.hpp"

namespace protoscan {

struct ExtensionProfile {
    std::vector<uint16_t> types; // wire order
    uint32_t total_bytes = 0;

    auto operator<=>(const ExtensionProfile &) const = default;
};

// Per-device aggregate of identifying attribute values. Ordered lists
// (cipher offers, DHCP parameter requests) are compared as atoms.
struct DeviceFingerprint {
    std::string device_id;

    std::set<std::vector<uint16_t>> tls_cipher_lists;
    std::set<ExtensionProfile> tls_extension_profiles;
    std::set<uint16_t> tls_server_selected;

    std::set<std::string> http_methods;
    std::set<std::string> http_hosts;
    std::set<std::string> http_uris; // normalized path templates
    std::set<std::string> http_user_agents;
    std::set<std::string> http_servers;

    std::set<std::vector<uint8_t>> dhcp_param_lists;

    bool empty() const;
    bool operator==(const DeviceFingerprint &) const = default;
};

// Numeric path segments become {n}, query values become {v}:
// "/api/v2/items/123?id=9" -> "/api/v2/items/{n}?id={v}".
std::string normalize_uri(std::string_view uri);

DeviceFingerprint build_fingerprint(std::string device_id, std::span<const AttributeBundle> bundles);

struct DistanceWeights {
    double tls_cipher_lists = 1.0;
    double tls_extension_profiles = 1.0;
    double tls_server_selected = 1.0;
    double http_methods = 1.0;
    double http_hosts = 1.0;
    double http_uris = 1.0;
    double http_user_agents = 1.0;
    double http_servers = 1.0;
    double dhcp_param_lists = 1.0;
};

// Weighted mean of per-dimension Jaccard distances over the dimensions
// populated on at least one side. nullopt when both fingerprints are
// entirely empty.
std::optional<double> fingerprint_distance(const DeviceFingerprint &a, const DeviceFingerprint &b,
                                           const DistanceWeights &weights = {});

// Ascending by distance; ties broken by server-selected cipher overlap,
// then device id. Library entries with undefined distance rank last.
std::vector<std::pair<std::string, double>> match_fingerprint(const DeviceFingerprint &observed,
                                                              std::span<const DeviceFingerprint> library);

std::string serialize_fingerprint(const DeviceFingerprint &fp);
DeviceFingerprint parse_fingerprint(const std::string &json_text);

void save_fingerprint(const DeviceFingerprint &fp, const std::filesystem::path &path);
DeviceFingerprint load_fingerprint(const std::filesystem::path &path);
std::vector<DeviceFingerprint> load_fingerprint_dir(const std::filesystem::path &dir);

} // namespace protoscan

#endif
