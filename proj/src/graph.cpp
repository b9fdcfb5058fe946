#include "plexus/graph.hpp"

#include <algorithm>
#include <cmath>

#include "plexus/errors.hpp"

namespace plexus {

namespace {

// Leaf labels are the first few code points of the tweet text.
constexpr std::size_t kLabelCodePoints = 32;

std::string truncate_label(std::string_view text) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto byte = static_cast<unsigned char>(text[i]);
        if ((byte & 0xC0) != 0x80) {
            if (count == kLabelCodePoints) return std::string(text.substr(0, i)) + "\xE2\x80\xA6";
            ++count;
        }
    }
    return std::string(text);
}

std::int64_t attr_int(const GraphNode& node, const char* key) {
    auto it = node.attrs.find(key);
    if (it == node.attrs.end()) return 0;
    if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
    return 0;
}

void require_node(const GraphSnapshot& s, const std::string& id, std::string_view what) {
    if (!s.nodes.count(id))
        throw IntegrityError(std::string(what) + " references unknown node '" + id + "'");
}

struct Validator {
    const GraphSnapshot& s;

    void operator()(const NodeAdded& e) const {
        if (e.node.id.empty()) throw IntegrityError("node_added with empty id");
        if (s.nodes.count(e.node.id)) throw IntegrityError("duplicate node id '" + e.node.id + "'");
    }
    void operator()(const EdgeAdded& e) const {
        if (e.id.empty()) throw IntegrityError("edge_added with empty id");
        if (s.edges.count(e.id)) throw IntegrityError("duplicate edge id '" + e.id + "'");
        require_node(s, e.from, "edge_added");
        require_node(s, e.to, "edge_added");
    }
    void operator()(const AttrChanged& e) const { require_node(s, e.node_id, "attr_changed"); }
    void operator()(const NodeRemoved& e) const {
        require_node(s, e.id, "node_removed");
        for (const auto& [id, edge] : s.edges)
            if (edge.from == e.id || edge.to == e.id)
                throw IntegrityError("node '" + e.id + "' still has edge '" + id + "'");
    }
    void operator()(const EdgeRemoved& e) const {
        if (!s.edges.count(e.id)) throw IntegrityError("edge_removed references unknown edge '" + e.id + "'");
    }
    void operator()(const PositionsUpdate& e) const {
        for (const auto& [id, p] : e.positions) {
            require_node(s, id, "positions");
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw IntegrityError("non-finite position for '" + id + "'");
        }
    }
};

struct Applier {
    GraphSnapshot& s;
    std::int64_t seq;

    void operator()(const NodeAdded& e) const { s.nodes.emplace(e.node.id, e.node); }
    void operator()(const EdgeAdded& e) const {
        s.edges.emplace(e.id, GraphEdge{e.id, e.from, e.to, seq});
    }
    void operator()(const AttrChanged& e) const { s.nodes.at(e.node_id).attrs[e.key] = e.value; }
    void operator()(const NodeRemoved& e) const {
        s.nodes.erase(e.id);
        s.positions.erase(e.id);
    }
    void operator()(const EdgeRemoved& e) const { s.edges.erase(e.id); }
    void operator()(const PositionsUpdate& e) const {
        for (const auto& [id, p] : e.positions) s.positions[id] = p;
    }
};

GraphNode make_node(std::string id, NodeKind kind, std::string label,
                    std::vector<std::string> classes, AttrMap attrs = {}) {
    return GraphNode{std::move(id), kind, std::move(label), std::move(classes), std::move(attrs)};
}

}  // namespace

std::string_view to_string(NodeKind k) noexcept {
    switch (k) {
        case NodeKind::topic: return "topic";
        case NodeKind::emotion: return "emotion";
        case NodeKind::tweet: return "tweet";
    }
    return "tweet";
}

std::optional<NodeKind> parse_node_kind(std::string_view s) noexcept {
    if (s == "topic") return NodeKind::topic;
    if (s == "emotion") return NodeKind::emotion;
    if (s == "tweet") return NodeKind::tweet;
    return std::nullopt;
}

std::string topic_node_id(TopicId t) { return "topic:" + std::string(to_string(t)); }

std::string emotion_node_id(TopicId t, Emotion e) {
    return std::string(to_string(t)) + ":" + std::string(to_string(e));
}

std::string tweet_node_id(TopicId t, std::string_view tweet_id) {
    return "t:" + std::string(to_string(t)) + ":" + std::string(tweet_id);
}

std::string edge_id(std::string_view from, std::string_view to) {
    return std::string(from) + "->" + std::string(to);
}

std::string_view event_type(const EventPayload& payload) noexcept {
    constexpr std::string_view names[] = {"node_added",   "edge_added",   "attr_changed",
                                          "node_removed", "edge_removed", "positions"};
    return names[payload.index()];
}

double round_position(double v) noexcept {
    const double r = std::round(v * 1000.0) / 1000.0;
    return r == 0.0 ? 0.0 : r;  // drop negative zero
}

const GraphNode* GraphSnapshot::node(std::string_view id) const {
    auto it = nodes.find(std::string(id));
    return it == nodes.end() ? nullptr : &it->second;
}

std::vector<const GraphEdge*> GraphSnapshot::leaf_edges(std::string_view hub_id) const {
    std::vector<const GraphEdge*> out;
    for (const auto& [id, edge] : edges) {
        if (edge.to != hub_id) continue;
        const auto* from = node(edge.from);
        if (from != nullptr && from->kind == NodeKind::tweet) out.push_back(&edge);
    }
    std::sort(out.begin(), out.end(),
              [](const GraphEdge* a, const GraphEdge* b) { return a->added_seq < b->added_seq; });
    return out;
}

void apply_event_in_place(GraphSnapshot& snapshot, const GraphEvent& event) {
    if (event.seq != snapshot.next_seq())
        throw OrderingError("expected seq " + std::to_string(snapshot.next_seq()) + ", got " +
                            std::to_string(event.seq));
    std::visit(Validator{snapshot}, event.payload);
    std::visit(Applier{snapshot, event.seq}, event.payload);
    snapshot.last_seq = event.seq;
}

GraphSnapshot apply_event(GraphSnapshot snapshot, const GraphEvent& event) {
    apply_event_in_place(snapshot, event);
    return snapshot;
}

GraphSnapshot fold_events(const std::vector<GraphEvent>& events) {
    GraphSnapshot snapshot;
    for (const auto& e : events) apply_event_in_place(snapshot, e);
    return snapshot;
}

std::vector<GraphEvent> init_session_graph(const TopicQuery& a, const TopicQuery& b,
                                           std::int64_t first_seq) {
    validate_topic_pair(a, b);
    std::vector<GraphEvent> events;
    auto seq = first_seq;
    for (const auto* q : {&a, &b}) {
        const auto hub = topic_node_id(q->topic);
        events.push_back({seq++, NodeAdded{make_node(hub, NodeKind::topic, q->phrase, {"topic"},
                                                     {{kAttrTopic, std::string(to_string(q->topic))}})}});
        for (auto e : kEmotions) {
            const auto id = emotion_node_id(q->topic, e);
            events.push_back({seq++, NodeAdded{make_node(id, NodeKind::emotion, std::string(to_string(e)),
                                                         {std::string(to_string(e))},
                                                         {{kAttrTotalCount, std::int64_t{0}}})}});
            events.push_back({seq++, EdgeAdded{edge_id(hub, id), hub, id}});
        }
    }
    return events;
}

std::vector<GraphEvent> ingest_tweet(const GraphSnapshot& snapshot, const Tweet& tweet,
                                     TopicId topic, const EmotionScores& scores) {
    const auto topic_id = topic_node_id(topic);
    if (snapshot.node(topic_id) == nullptr)
        throw ContractError("topic cluster '" + std::string(to_string(topic)) + "' is not initialised");
    if (scores.all_zero()) return {};

    const auto label = final_emotion(scores);
    const auto hub_id = emotion_node_id(topic, label);
    const auto* hub = snapshot.node(hub_id);
    if (hub == nullptr) throw ContractError("emotion hub '" + hub_id + "' is missing");
    const auto leaf_id = tweet_node_id(topic, tweet.id);
    if (snapshot.node(leaf_id) != nullptr)
        throw ContractError("tweet node '" + leaf_id + "' already exists");

    std::vector<GraphEvent> events;
    auto seq = snapshot.next_seq();
    events.push_back({seq++, NodeAdded{make_node(leaf_id, NodeKind::tweet, truncate_label(tweet.text),
                                                 {std::string(to_string(label))},
                                                 {{kAttrTweetId, tweet.id},
                                                  {kAttrTopic, std::string(to_string(topic))}})}});
    events.push_back({seq++, EdgeAdded{edge_id(leaf_id, hub_id), leaf_id, hub_id}});
    events.push_back({seq++, AttrChanged{hub_id, kAttrTotalCount, attr_int(*hub, kAttrTotalCount) + 1}});

    const auto leaves = snapshot.leaf_edges(hub_id);
    if (leaves.size() + 1 > kLeafCap) {
        const GraphEdge* oldest = leaves.front();
        events.push_back({seq++, EdgeRemoved{oldest->id}});
        events.push_back({seq++, NodeRemoved{oldest->from}});
    }
    return events;
}

}  // namespace plexus
