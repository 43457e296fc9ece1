#ifndef PROTOSCAN_MATCH_HPP
#define PROTOSCAN_MATCH_HPP

#include <span>
#include <string>
#include <vector>

#include "protoscan/flow.hpp"
#include "protoscan/model.hpp"

namespace protoscan {

enum class Confidence { full, partial };

std::string_view to_string(Confidence c);

// A protocol label for one flow. Port agreement is advisory: it feeds the
// ranking and the standard/non-standard report split, never the match
// decision itself.
struct Detection {
    size_t flow_index = 0;
    std::string protocol;
    std::vector<Direction> matched_directions;
    bool port_hint_agreed = false;
    Confidence confidence = Confidence::full;
};

// Payload view handed to matchers: the direction's ordered stream plus the
// first packet's payload length (the payload_length statistical metric is
// defined over the first packet, not the whole stream).
struct DirectionView {
    std::span<const uint8_t> stream;
    size_t first_packet_len = 0;
};

bool run_matcher(const Matcher &m, DirectionView view);
bool run_matcher(const Matcher &m, std::span<const uint8_t> payload);

// Applies one model's contents to a flow: per-direction eval over matcher
// truth values, then select over direction truth values. A direction with
// no eval expression requires all of its matchers; an absent select is an
// OR over present directions.
std::optional<Detection> apply_model(const ProtocolModel &m, const Flow &f,
                                     const FlowConfig &config = {});

// Applies every model and ranks the detections: full before partial, port
// agreement before disagreement, traffic-mode agreement next, byte-signature
// models before regex-only models. The head of the list is the primary label.
std::vector<Detection> detect_all(std::span<const ProtocolModel> models, const Flow &f,
                                  size_t flow_index = 0, const FlowConfig &config = {});

} // namespace protoscan

#endif
