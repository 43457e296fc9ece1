#include "protoscan/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "protoscan/bytes.hpp"

namespace protoscan {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(TrafficModeHint m) {
    switch (m) {
    case TrafficModeHint::unicast: return "unicast";
    case TrafficModeHint::multicast: return "multicast";
    case TrafficModeHint::broadcast: return "broadcast";
    case TrafficModeHint::any: return "any";
    }
    return "any";
}

std::optional<TrafficModeHint> traffic_mode_hint_from_string(std::string_view s) {
    if (s == "unicast") return TrafficModeHint::unicast;
    if (s == "multicast") return TrafficModeHint::multicast;
    if (s == "broadcast") return TrafficModeHint::broadcast;
    if (s == "any") return TrafficModeHint::any;
    return std::nullopt;
}

std::string_view to_string(StatMetric m) {
    return m == StatMetric::printable_ratio ? "printable_ratio" : "payload_length";
}

std::string_view to_string(StatComparator c) {
    switch (c) {
    case StatComparator::lt: return "<";
    case StatComparator::le: return "<=";
    case StatComparator::gt: return ">";
    case StatComparator::ge: return ">=";
    case StatComparator::eq: return "==";
    case StatComparator::ne: return "!=";
    }
    return "==";
}

std::string_view to_string(MatcherType t) {
    switch (t) {
    case MatcherType::string_pattern: return "string";
    case MatcherType::byte_pattern: return "byte";
    case MatcherType::statistical: return "statistical";
    }
    return "string";
}

bool StringPattern::compile() {
    try {
        auto flags = std::regex::ECMAScript | std::regex::optimize;
        if (!case_sensitive) flags |= std::regex::icase;
        compiled = std::make_shared<const std::regex>(regex, flags);
        return true;
    } catch (const std::regex_error &) {
        compiled.reset();
        return false;
    }
}

namespace {

[[noreturn]] void schema_error(const std::string &msg) {
    throw ModelError(ModelError::Kind::schema_error, msg);
}

void require_keys(const ordered_json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            schema_error("unknown field \"" + it.key() + "\" in " + where);
        }
    }
}

std::string get_string(const ordered_json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end()) return {};
    if (!it->is_string()) schema_error(std::string(key) + " in " + where + " must be a string");
    return it->get<std::string>();
}

uint16_t parse_ether_type(const ordered_json &v) {
    long code = -1;
    if (v.is_number_unsigned() || v.is_number_integer()) {
        code = v.get<long>();
    } else if (v.is_string()) {
        auto bytes = from_hex(v.get<std::string>());
        if (bytes.size() > 2) schema_error("ether-type wider than 16 bits");
        code = 0;
        for (uint8_t b : bytes) code = code << 8 | b;
    } else {
        schema_error("ether-type must be an integer or hex string");
    }
    if (code < 0 || code > 0xffff) schema_error("ether-type out of 16-bit range");
    return static_cast<uint16_t>(code);
}

uint8_t parse_ip_protocol(const ordered_json &v) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        std::transform(s.begin(), s.end(), s.begin(), ::toupper);
        if (s == "TCP") return 6;
        if (s == "UDP") return 17;
        schema_error("ip-protocol must be TCP or UDP, got \"" + s + "\"");
    }
    if (v.is_number_integer() || v.is_number_unsigned()) {
        long n = v.get<long>();
        if (n == 6 || n == 17) return static_cast<uint8_t>(n);
    }
    schema_error("ip-protocol must be TCP(6) or UDP(17)");
}

Metadata parse_metadata(const ordered_json &obj) {
    require_keys(obj, {"ether-types", "traffic-mode", "server-ports"}, "metadata");
    Metadata md;
    if (auto it = obj.find("ether-types"); it != obj.end()) {
        if (!it->is_array()) schema_error("ether-types must be an array");
        for (const auto &v : *it) md.ether_types.push_back(parse_ether_type(v));
    }
    if (auto it = obj.find("traffic-mode"); it != obj.end()) {
        if (!it->is_string()) schema_error("traffic-mode must be a string");
        auto tm = traffic_mode_hint_from_string(it->get<std::string>());
        if (!tm) schema_error("unknown traffic-mode \"" + it->get<std::string>() + "\"");
        md.traffic_mode = *tm;
    }
    if (auto it = obj.find("server-ports"); it != obj.end()) {
        if (!it->is_array()) schema_error("server-ports must be an array");
        for (const auto &v : *it) {
            if (!v.is_object()) schema_error("server-ports entries must be objects");
            require_keys(v, {"ip-protocol", "port"}, "server-ports entry");
            if (!v.contains("ip-protocol") || !v.contains("port")) {
                schema_error("server-ports entries need ip-protocol and port");
            }
            PortRef ref;
            ref.ip_protocol = parse_ip_protocol(v["ip-protocol"]);
            const auto &p = v["port"];
            if (!p.is_number_integer() && !p.is_number_unsigned()) schema_error("port must be an integer");
            long port = p.get<long>();
            if (port < 0 || port > 65535) schema_error("port out of range: " + std::to_string(port));
            ref.port = static_cast<uint16_t>(port);
            md.server_ports.push_back(ref);
        }
    }
    return md;
}

Matcher parse_matcher(const ordered_json &obj, const std::string &where) {
    require_keys(obj, {"id", "matcher-type", "matcher-pattern"}, where);
    if (!obj.contains("id") || !obj.contains("matcher-type") || !obj.contains("matcher-pattern")) {
        schema_error("matcher in " + where + " needs id, matcher-type and matcher-pattern");
    }
    Matcher m;
    if (!obj["id"].is_string()) schema_error("matcher id must be a string");
    m.id = obj["id"].get<std::string>();
    const std::string type = get_string(obj, "matcher-type", where);
    const ordered_json &pat = obj["matcher-pattern"];

    if (type == "string") {
        if (!pat.is_object()) schema_error("string matcher-pattern must be an object");
        require_keys(pat, {"regex", "case-sensitive"}, "string pattern of " + m.id);
        StringPattern sp;
        if (!pat.contains("regex") || !pat["regex"].is_string()) {
            schema_error("string pattern of " + m.id + " needs a regex string");
        }
        sp.regex = pat["regex"].get<std::string>();
        if (auto it = pat.find("case-sensitive"); it != pat.end()) {
            if (!it->is_boolean()) schema_error("case-sensitive must be a boolean");
            sp.case_sensitive = it->get<bool>();
        }
        sp.compile(); // failure surfaces as a validation diagnostic
        m.pattern = std::move(sp);
    } else if (type == "byte") {
        if (!pat.is_array()) schema_error("byte matcher-pattern must be an array of entries");
        std::vector<BytePatternEntry> entries;
        for (const auto &e : pat) {
            if (!e.is_object()) schema_error("byte pattern entries must be objects");
            require_keys(e, {"offset", "value", "mask"}, "byte pattern of " + m.id);
            if (!e.contains("offset") || !e.contains("value")) {
                schema_error("byte pattern of " + m.id + " needs offset and value");
            }
            BytePatternEntry entry;
            if (!e["offset"].is_number_unsigned() && !e["offset"].is_number_integer()) {
                schema_error("byte pattern offset must be an integer");
            }
            long off = e["offset"].get<long>();
            if (off < 0) schema_error("byte pattern offset must be non-negative");
            entry.offset = static_cast<size_t>(off);
            if (!e["value"].is_string()) schema_error("byte pattern value must be a hex string");
            try {
                entry.value = from_hex(e["value"].get<std::string>());
                if (auto it = e.find("mask"); it != e.end()) {
                    if (!it->is_string()) schema_error("byte pattern mask must be a hex string");
                    entry.mask = from_hex(it->get<std::string>());
                } else {
                    entry.mask.assign(entry.value.size(), 0xff);
                }
            } catch (const std::invalid_argument &ex) {
                schema_error("byte pattern of " + m.id + ": " + ex.what());
            }
            entries.push_back(std::move(entry));
        }
        m.pattern = std::move(entries);
    } else if (type == "statistical") {
        if (!pat.is_object()) schema_error("statistical matcher-pattern must be an object");
        require_keys(pat, {"metric", "comparator", "threshold"}, "statistical pattern of " + m.id);
        StatPattern sp;
        std::string metric = get_string(pat, "metric", m.id);
        if (metric == "printable_ratio") sp.metric = StatMetric::printable_ratio;
        else if (metric == "payload_length") sp.metric = StatMetric::payload_length;
        else schema_error("unknown statistical metric \"" + metric + "\"");
        std::string cmp = get_string(pat, "comparator", m.id);
        if (cmp == "<") sp.comparator = StatComparator::lt;
        else if (cmp == "<=") sp.comparator = StatComparator::le;
        else if (cmp == ">") sp.comparator = StatComparator::gt;
        else if (cmp == ">=") sp.comparator = StatComparator::ge;
        else if (cmp == "==") sp.comparator = StatComparator::eq;
        else if (cmp == "!=") sp.comparator = StatComparator::ne;
        else schema_error("unknown comparator \"" + cmp + "\"");
        if (!pat.contains("threshold") || !pat["threshold"].is_number()) {
            schema_error("statistical pattern of " + m.id + " needs a numeric threshold");
        }
        sp.threshold = pat["threshold"].get<double>();
        m.pattern = sp;
    } else {
        schema_error("unknown matcher-type \"" + type + "\"");
    }
    return m;
}

DirectionContents parse_direction(const ordered_json &obj, const std::string &where) {
    require_keys(obj, {"matchers", "eval"}, where);
    DirectionContents dc;
    if (auto it = obj.find("matchers"); it != obj.end()) {
        if (!it->is_array()) schema_error("matchers in " + where + " must be an array");
        for (const auto &m : *it) {
            if (!m.is_object()) schema_error("matchers in " + where + " must be objects");
            dc.matchers.push_back(parse_matcher(m, where));
        }
    }
    dc.eval_source = get_string(obj, "eval", where);
    if (!dc.eval_source.empty()) {
        try {
            dc.eval = BoolExpr::parse(dc.eval_source);
        } catch (const ExprError &ex) {
            schema_error("eval in " + where + ": " + ex.what());
        }
    }
    return dc;
}

ordered_json matcher_to_json(const Matcher &m) {
    ordered_json out;
    out["id"] = m.id;
    out["matcher-type"] = std::string(to_string(m.type()));
    switch (m.type()) {
    case MatcherType::string_pattern: {
        const auto &sp = std::get<StringPattern>(m.pattern);
        out["matcher-pattern"] = {{"regex", sp.regex}, {"case-sensitive", sp.case_sensitive}};
        break;
    }
    case MatcherType::byte_pattern: {
        ordered_json arr = ordered_json::array();
        for (const auto &e : std::get<std::vector<BytePatternEntry>>(m.pattern)) {
            ordered_json je;
            je["offset"] = e.offset;
            je["value"] = to_hex(e.value);
            je["mask"] = to_hex(e.mask);
            arr.push_back(std::move(je));
        }
        out["matcher-pattern"] = std::move(arr);
        break;
    }
    case MatcherType::statistical: {
        const auto &sp = std::get<StatPattern>(m.pattern);
        out["matcher-pattern"] = {{"metric", std::string(to_string(sp.metric))},
                                  {"comparator", std::string(to_string(sp.comparator))},
                                  {"threshold", sp.threshold}};
        break;
    }
    }
    return out;
}

ordered_json direction_to_json(const DirectionContents &dc) {
    ordered_json out;
    ordered_json arr = ordered_json::array();
    for (const auto &m : dc.matchers) arr.push_back(matcher_to_json(m));
    out["matchers"] = std::move(arr);
    if (!dc.eval_source.empty()) out["eval"] = dc.eval_source;
    return out;
}

} // namespace

ProtocolModel parse_model(const std::string &json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error &ex) {
        throw ModelError(ModelError::Kind::parse_error, ex.what());
    }
    if (!doc.is_object()) schema_error("model document must be a JSON object");
    require_keys(doc, {"info", "metadata", "contents"}, "model");
    if (!doc.contains("info") || !doc["info"].is_object()) {
        schema_error("model document needs an info object");
    }

    ProtocolModel model;
    const auto &info = doc["info"];
    require_keys(info, {"abbreviation", "standard-name", "description", "source"}, "info");
    model.info.abbreviation = get_string(info, "abbreviation", "info");
    model.info.standard_name = get_string(info, "standard-name", "info");
    model.info.description = get_string(info, "description", "info");
    model.info.source = get_string(info, "source", "info");

    if (auto it = doc.find("metadata"); it != doc.end()) {
        if (!it->is_object()) schema_error("metadata must be an object");
        model.metadata = parse_metadata(*it);
    }

    if (auto it = doc.find("contents"); it != doc.end()) {
        if (!it->is_object()) schema_error("contents must be an object");
        require_keys(*it, {"request", "response", "combined", "select"}, "contents");
        for (const char *dir : {"request", "response", "combined"}) {
            auto d = it->find(dir);
            if (d == it->end()) continue;
            if (!d->is_object()) schema_error(std::string(dir) + " contents must be an object");
            DirectionContents dc = parse_direction(*d, std::string("contents.") + dir);
            if (std::string(dir) == "request") model.contents.request = std::move(dc);
            else if (std::string(dir) == "response") model.contents.response = std::move(dc);
            else model.contents.combined = std::move(dc);
        }
        model.contents.select_source = get_string(*it, "select", "contents");
        if (!model.contents.select_source.empty()) {
            try {
                model.contents.select = BoolExpr::parse(model.contents.select_source);
            } catch (const ExprError &ex) {
                schema_error(std::string("select: ") + ex.what());
            }
        }
    }

    auto diags = validate_model(model);
    if (has_errors(diags)) {
        std::string msg = "model \"" + model.info.abbreviation + "\" failed validation:";
        for (const auto &d : diags) {
            if (d.severity == Severity::error) msg += "\n  " + d.to_string();
        }
        schema_error(msg);
    }
    return model;
}

std::string serialize_model(const ProtocolModel &m) {
    ordered_json doc;
    ordered_json info;
    info["abbreviation"] = m.info.abbreviation;
    if (!m.info.standard_name.empty()) info["standard-name"] = m.info.standard_name;
    if (!m.info.description.empty()) info["description"] = m.info.description;
    if (!m.info.source.empty()) info["source"] = m.info.source;
    doc["info"] = std::move(info);

    if (!(m.metadata == Metadata{})) {
        ordered_json md;
        if (!m.metadata.ether_types.empty()) {
            ordered_json arr = ordered_json::array();
            for (uint16_t e : m.metadata.ether_types) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "0x%04x", e);
                arr.push_back(std::string(buf));
            }
            md["ether-types"] = std::move(arr);
        }
        if (m.metadata.traffic_mode != TrafficModeHint::any) {
            md["traffic-mode"] = std::string(to_string(m.metadata.traffic_mode));
        }
        if (!m.metadata.server_ports.empty()) {
            ordered_json arr = ordered_json::array();
            for (const auto &p : m.metadata.server_ports) {
                arr.push_back({{"ip-protocol", p.ip_protocol == 6 ? "TCP" : "UDP"}, {"port", p.port}});
            }
            md["server-ports"] = std::move(arr);
        }
        doc["metadata"] = std::move(md);
    }

    const Contents &c = m.contents;
    if (c.request || c.response || c.combined || !c.select_source.empty()) {
        ordered_json contents;
        if (c.request) contents["request"] = direction_to_json(*c.request);
        if (c.response) contents["response"] = direction_to_json(*c.response);
        if (c.combined) contents["combined"] = direction_to_json(*c.combined);
        if (!c.select_source.empty()) contents["select"] = c.select_source;
        doc["contents"] = std::move(contents);
    }
    return doc.dump(2) + "\n";
}

ProtocolModel load_model_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ModelError(ModelError::Kind::parse_error, "cannot open " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_model(text);
    } catch (const ModelError &ex) {
        throw ModelError(ex.kind, path.filename().string() + ": " + ex.what());
    }
}

std::vector<ProtocolModel> load_model_dir(const std::filesystem::path &dir) {
    std::vector<std::filesystem::path> files;
    for (const auto &entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<ProtocolModel> models;
    for (const auto &f : files) models.push_back(load_model_file(f));
    auto diags = validate_model_set(models);
    if (has_errors(diags)) {
        std::string msg = "model set in " + dir.string() + " failed validation:";
        for (const auto &d : diags) {
            if (d.severity == Severity::error) msg += "\n  " + d.to_string();
        }
        throw ModelError(ModelError::Kind::schema_error, msg);
    }
    return models;
}

std::string Diagnostic::to_string() const {
    std::string out = severity == Severity::error ? "error" : "warning";
    out += " [" + code + "]";
    if (!model.empty()) out += " " + model;
    out += ": " + message;
    return out;
}

namespace {

void validate_direction(const ProtocolModel &m, const DirectionContents &dc, const std::string &dir,
                        std::vector<Diagnostic> &out) {
    std::set<std::string> ids;
    for (const auto &matcher : dc.matchers) {
        if (!ids.insert(matcher.id).second) {
            out.push_back({Severity::error, "duplicate-matcher-id",
                           "matcher id \"" + matcher.id + "\" repeats in " + dir, m.info.abbreviation});
        }
        if (matcher.type() == MatcherType::byte_pattern) {
            for (const auto &e : std::get<std::vector<BytePatternEntry>>(matcher.pattern)) {
                if (e.mask.size() != e.value.size()) {
                    out.push_back({Severity::error, "mask-length",
                                   "matcher \"" + matcher.id + "\": mask length " + std::to_string(e.mask.size()) +
                                       " != value length " + std::to_string(e.value.size()),
                                   m.info.abbreviation});
                }
            }
        } else if (matcher.type() == MatcherType::string_pattern) {
            StringPattern sp = std::get<StringPattern>(matcher.pattern);
            if (!sp.compiled && !sp.compile()) {
                out.push_back({Severity::error, "regex-invalid",
                               "matcher \"" + matcher.id + "\": regex does not compile: " + sp.regex,
                               m.info.abbreviation});
            }
        } else {
            const auto &sp = std::get<StatPattern>(matcher.pattern);
            if (sp.metric == StatMetric::printable_ratio && (sp.threshold < 0.0 || sp.threshold > 1.0)) {
                out.push_back({Severity::warning, "stat-threshold-range",
                               "matcher \"" + matcher.id + "\": printable_ratio threshold outside [0,1]",
                               m.info.abbreviation});
            }
        }
    }
    if (!dc.eval_source.empty()) {
        try {
            BoolExpr expr = BoolExpr::parse(dc.eval_source);
            for (const auto &var : expr.variables()) {
                if (!ids.count(var)) {
                    out.push_back({Severity::error, "eval-unknown-id",
                                   "eval in " + dir + " references undefined matcher \"" + var + "\"",
                                   m.info.abbreviation});
                }
            }
        } catch (const ExprError &ex) {
            out.push_back({Severity::error, "expr-syntax", "eval in " + dir + ": " + ex.what(),
                           m.info.abbreviation});
        }
    }
}

} // namespace

std::vector<Diagnostic> validate_model(const ProtocolModel &m) {
    std::vector<Diagnostic> out;
    if (m.info.abbreviation.empty()) {
        out.push_back({Severity::error, "abbreviation-empty", "info.abbreviation must not be empty", ""});
    }
    for (const auto &p : m.metadata.server_ports) {
        if (p.port == 0) {
            out.push_back({Severity::error, "port-range", "server-port 0 is not a valid port",
                           m.info.abbreviation});
        }
        if (p.ip_protocol != 6 && p.ip_protocol != 17) {
            out.push_back({Severity::error, "port-protocol",
                           "server-port protocol must be TCP(6) or UDP(17)", m.info.abbreviation});
        }
    }
    if (m.metadata.server_ports.empty()) {
        out.push_back({Severity::warning, "no-port-hint",
                       "port-agnostic only: model declares no server-port hint", m.info.abbreviation});
    }

    if (m.contents.request) validate_direction(m, *m.contents.request, "request", out);
    if (m.contents.response) validate_direction(m, *m.contents.response, "response", out);
    if (m.contents.combined) validate_direction(m, *m.contents.combined, "combined", out);

    if (!m.contents.select_source.empty()) {
        try {
            BoolExpr expr = BoolExpr::parse(m.contents.select_source);
            for (const auto &var : expr.variables()) {
                bool present = (var == "request" && m.contents.request) ||
                               (var == "response" && m.contents.response) ||
                               (var == "combined" && m.contents.combined);
                if (!present) {
                    out.push_back({Severity::error, "select-unknown-direction",
                                   "select references direction \"" + var + "\" with no contents section",
                                   m.info.abbreviation});
                }
            }
        } catch (const ExprError &ex) {
            out.push_back({Severity::error, "expr-syntax", std::string("select: ") + ex.what(),
                           m.info.abbreviation});
        }
    }
    return out;
}

std::vector<Diagnostic> validate_model_set(std::span<const ProtocolModel> models) {
    std::vector<Diagnostic> out;
    std::map<std::string, int> seen;
    for (const auto &m : models) {
        auto diags = validate_model(m);
        out.insert(out.end(), diags.begin(), diags.end());
        if (++seen[m.info.abbreviation] == 2) {
            out.push_back({Severity::error, "duplicate-abbreviation",
                           "abbreviation \"" + m.info.abbreviation + "\" used by more than one model",
                           m.info.abbreviation});
        }
    }
    return out;
}

} // namespace protoscan
