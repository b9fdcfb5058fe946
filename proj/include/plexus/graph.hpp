#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "plexus/emotion.hpp"
#include "plexus/ingest.hpp"

namespace plexus {

enum class NodeKind : std::uint8_t { topic, emotion, tweet };

std::string_view to_string(NodeKind k) noexcept;
std::optional<NodeKind> parse_node_kind(std::string_view s) noexcept;

using AttrValue = std::variant<std::int64_t, std::string>;
using AttrMap = std::map<std::string, AttrValue>;

// Attribute keys.
inline constexpr const char* kAttrTotalCount = "total_count";
inline constexpr const char* kAttrTweetId = "tweet_id";
inline constexpr const char* kAttrTopic = "topic";

// Live tweet leaves per emotion hub; older leaves are evicted FIFO.
inline constexpr std::size_t kLeafCap = 50;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct GraphNode {
    std::string id;
    NodeKind kind = NodeKind::tweet;
    std::string label;
    std::vector<std::string> classes;
    AttrMap attrs;

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
    std::string id;
    std::string from;
    std::string to;
    std::int64_t added_seq = 0;  // seq of the edge_added event; orders FIFO eviction

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// ---- ids --------------------------------------------------------------------

std::string topic_node_id(TopicId t);                      // topic:A
std::string emotion_node_id(TopicId t, Emotion e);         // A:joy
std::string tweet_node_id(TopicId t, std::string_view tweet_id);  // t:A:<tweet id>
std::string edge_id(std::string_view from, std::string_view to);  // <from>-><to>

// ---- events -------------------------------------------------------------------

struct NodeAdded {
    GraphNode node;
    friend bool operator==(const NodeAdded&, const NodeAdded&) = default;
};
struct EdgeAdded {
    std::string id;
    std::string from;
    std::string to;
    friend bool operator==(const EdgeAdded&, const EdgeAdded&) = default;
};
struct AttrChanged {
    std::string node_id;
    std::string key;
    AttrValue value;
    friend bool operator==(const AttrChanged&, const AttrChanged&) = default;
};
struct NodeRemoved {
    std::string id;
    friend bool operator==(const NodeRemoved&, const NodeRemoved&) = default;
};
struct EdgeRemoved {
    std::string id;
    friend bool operator==(const EdgeRemoved&, const EdgeRemoved&) = default;
};
// Coordinates carry exactly three decimals (see round_position).
struct PositionsUpdate {
    std::map<std::string, Vec2> positions;
    friend bool operator==(const PositionsUpdate&, const PositionsUpdate&) = default;
};

using EventPayload =
    std::variant<NodeAdded, EdgeAdded, AttrChanged, NodeRemoved, EdgeRemoved, PositionsUpdate>;

struct GraphEvent {
    std::int64_t seq = 0;
    EventPayload payload;
    friend bool operator==(const GraphEvent&, const GraphEvent&) = default;
};

std::string_view event_type(const EventPayload& payload) noexcept;

// Rounds a coordinate to the published 3-decimal precision.
double round_position(double v) noexcept;

// ---- snapshot -------------------------------------------------------------------

struct GraphSnapshot {
    std::map<std::string, GraphNode> nodes;
    std::map<std::string, GraphEdge> edges;
    std::map<std::string, Vec2> positions;
    std::int64_t last_seq = -1;  // -1: no event applied yet

    const GraphNode* node(std::string_view id) const;
    std::int64_t next_seq() const noexcept { return last_seq + 1; }

    // Tweet leaves attached to an emotion hub, oldest first.
    std::vector<const GraphEdge*> leaf_edges(std::string_view hub_id) const;
    std::size_t live_leaves(std::string_view hub_id) const { return leaf_edges(hub_id).size(); }

    friend bool operator==(const GraphSnapshot&, const GraphSnapshot&) = default;
};

// Applies one event in place. Validates before mutating, so a throw leaves the
// snapshot untouched. Throws OrderingError on a seq gap, IntegrityError on a
// dangling or duplicate reference.
void apply_event_in_place(GraphSnapshot& snapshot, const GraphEvent& event);

// Pure variant: returns the updated copy.
GraphSnapshot apply_event(GraphSnapshot snapshot, const GraphEvent& event);

GraphSnapshot fold_events(const std::vector<GraphEvent>& events);

// ---- session topology -------------------------------------------------------------

// Two topic hubs, each linked to its five emotion hubs: 12 node_added and 10
// edge_added events numbered from `first_seq`.
std::vector<GraphEvent> init_session_graph(const TopicQuery& a, const TopicQuery& b,
                                           std::int64_t first_seq = 0);

// Events attaching one scored tweet under `topic`. Empty when every score is
// zero. Throws ContractError when the topic cluster is missing or the leaf id
// is already live.
std::vector<GraphEvent> ingest_tweet(const GraphSnapshot& snapshot, const Tweet& tweet,
                                     TopicId topic, const EmotionScores& scores);

}  // namespace plexus
