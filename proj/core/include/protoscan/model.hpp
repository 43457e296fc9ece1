#ifndef PROTOSCAN_MODEL_HPP
#define PROTOSCAN_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "protoscan/bool_expr.hpp"

namespace protoscan {

class ModelError : public std::runtime_error {
public:
    enum class Kind { parse_error, schema_error };

    ModelError(Kind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}

    Kind kind;
};

struct Info {
    std::string abbreviation;
    std::string standard_name;
    std::string description;
    std::string source;

    bool operator==(const Info &) const = default;
};

enum class TrafficModeHint { unicast, multicast, broadcast, any };

std::string_view to_string(TrafficModeHint m);
std::optional<TrafficModeHint> traffic_mode_hint_from_string(std::string_view s);

struct PortRef {
    uint8_t ip_protocol = 0; // 6 or 17
    uint16_t port = 0;

    auto operator<=>(const PortRef &) const = default;
};

struct Metadata {
    std::vector<uint16_t> ether_types;
    TrafficModeHint traffic_mode = TrafficModeHint::any;
    std::vector<PortRef> server_ports;

    bool operator==(const Metadata &) const = default;
};

struct StringPattern {
    std::string regex;
    bool case_sensitive = true;

    // Compiled lazily or by compile(); excluded from equality.
    std::shared_ptr<const std::regex> compiled;

    // Returns false if the expression does not compile.
    bool compile();

    bool operator==(const StringPattern &o) const {
        return regex == o.regex && case_sensitive == o.case_sensitive;
    }
};

struct BytePatternEntry {
    size_t offset = 0;
    std::vector<uint8_t> value;
    std::vector<uint8_t> mask; // same length as value

    bool operator==(const BytePatternEntry &) const = default;
};

enum class StatMetric { printable_ratio, payload_length };
enum class StatComparator { lt, le, gt, ge, eq, ne };

std::string_view to_string(StatMetric m);
std::string_view to_string(StatComparator c);

struct StatPattern {
    StatMetric metric = StatMetric::printable_ratio;
    StatComparator comparator = StatComparator::ge;
    double threshold = 0.0;

    bool operator==(const StatPattern &) const = default;
};

enum class MatcherType { string_pattern, byte_pattern, statistical };

std::string_view to_string(MatcherType t);

struct Matcher {
    std::string id;
    std::variant<StringPattern, std::vector<BytePatternEntry>, StatPattern> pattern;

    MatcherType type() const { return static_cast<MatcherType>(pattern.index()); }

    bool operator==(const Matcher &) const = default;
};

struct DirectionContents {
    std::vector<Matcher> matchers;
    std::string eval_source; // empty means "all matchers must hold"
    BoolExpr eval;

    bool operator==(const DirectionContents &o) const {
        return matchers == o.matchers && eval_source == o.eval_source;
    }
};

struct Contents {
    std::optional<DirectionContents> request;
    std::optional<DirectionContents> response;
    std::optional<DirectionContents> combined;
    std::string select_source; // empty means "any present direction"
    BoolExpr select;

    bool operator==(const Contents &o) const {
        return request == o.request && response == o.response && combined == o.combined &&
               select_source == o.select_source;
    }
};

struct ProtocolModel {
    Info info;
    Metadata metadata;
    Contents contents;

    bool operator==(const ProtocolModel &) const = default;
};

// Parses one model document (UTF-8 JSON). The schema is closed: unknown
// fields are rejected. Structural problems raise parse_error; semantic
// problems (unknown matcher type, invariant violations) raise schema_error.
ProtocolModel parse_model(const std::string &json_text);

std::string serialize_model(const ProtocolModel &m);

ProtocolModel load_model_file(const std::filesystem::path &path);

// Loads every *.json in the directory, sorted by filename, and rejects the
// set if validation finds errors.
std::vector<ProtocolModel> load_model_dir(const std::filesystem::path &dir);

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity = Severity::error;
    std::string code;
    std::string message;
    std::string model; // abbreviation when known

    std::string to_string() const;
};

std::vector<Diagnostic> validate_model(const ProtocolModel &m);
std::vector<Diagnostic> validate_model_set(std::span<const ProtocolModel> models);

inline bool has_errors(const std::vector<Diagnostic> &diags) {
    for (const auto &d : diags) {
        if (d.severity == Severity::error) return true;
    }
    return false;
}

} // namespace protoscan

#endif
