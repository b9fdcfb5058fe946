#include "plexus/event_codec.hpp"

#include <json.hpp>

#include "plexus/errors.hpp"
#include "plexus/json_writer.hpp"

namespace plexus {

namespace {

using json = nlohmann::json;

constexpr int kPositionDecimals = 3;

void write_attr(JsonWriter& w, const AttrValue& v) {
    if (const auto* n = std::get_if<std::int64_t>(&v))
        w.value(*n);
    else
        w.value(std::get<std::string>(v));
}

void write_node(JsonWriter& w, const GraphNode& node) {
    w.begin_object();
    w.key("id").value(node.id);
    w.key("kind").value(to_string(node.kind));
    w.key("label").value(node.label);
    w.key("classes").begin_array();
    for (const auto& c : node.classes) w.value(c);
    w.end_array();
    w.key("attrs").begin_object();
    for (const auto& [k, v] : node.attrs) {
        w.key(k);
        write_attr(w, v);
    }
    w.end_object();
    w.end_object();
}

void write_positions(JsonWriter& w, const std::map<std::string, Vec2>& positions) {
    w.begin_object();
    for (const auto& [id, p] : positions) {
        w.key(id).begin_array();
        w.fixed(p.x, kPositionDecimals).fixed(p.y, kPositionDecimals);
        w.end_array();
    }
    w.end_object();
}

struct PayloadWriter {
    JsonWriter& w;

    void operator()(const NodeAdded& e) const { w.key("node"); write_node(w, e.node); }
    void operator()(const EdgeAdded& e) const {
        w.key("id").value(e.id).key("from").value(e.from).key("to").value(e.to);
    }
    void operator()(const AttrChanged& e) const {
        w.key("node_id").value(e.node_id).key("key").value(e.key).key("value");
        write_attr(w, e.value);
    }
    void operator()(const NodeRemoved& e) const { w.key("id").value(e.id); }
    void operator()(const EdgeRemoved& e) const { w.key("id").value(e.id); }
    void operator()(const PositionsUpdate& e) const {
        w.key("positions");
        write_positions(w, e.positions);
    }
};

void write_event(JsonWriter& w, const GraphEvent& event, const std::string_view* session) {
    w.begin_object();
    w.key("seq").value(event.seq);
    if (session) w.key("session").value(*session);
    w.key("event").begin_object();
    w.key("type").value(event_type(event.payload));
    std::visit(PayloadWriter{w}, event.payload);
    w.end_object();
    w.end_object();
}

// ---- parsing -----------------------------------------------------------------

const json& member(const json& obj, const char* key) {
    if (!obj.is_object()) throw ProtocolError(std::string("expected an object around \"") + key + "\"");
    auto it = obj.find(key);
    if (it == obj.end()) throw ProtocolError(std::string("missing \"") + key + "\"");
    return *it;
}

std::string string_member(const json& obj, const char* key) {
    const auto& v = member(obj, key);
    if (!v.is_string()) throw ProtocolError(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::int64_t int_member(const json& obj, const char* key) {
    const auto& v = member(obj, key);
    if (!v.is_number_integer()) throw ProtocolError(std::string("\"") + key + "\" must be an integer");
    return v.get<std::int64_t>();
}

AttrValue attr_from(const json& v) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) return v.get<std::string>();
    throw ProtocolError("attribute values are integers or strings");
}

GraphNode node_from(const json& obj) {
    GraphNode node;
    node.id = string_member(obj, "id");
    const auto kind = parse_node_kind(string_member(obj, "kind"));
    if (!kind) throw ProtocolError("unknown node kind");
    node.kind = *kind;
    node.label = string_member(obj, "label");
    const auto& classes = member(obj, "classes");
    if (!classes.is_array()) throw ProtocolError("\"classes\" must be an array");
    for (const auto& c : classes) {
        if (!c.is_string()) throw ProtocolError("class names are strings");
        node.classes.push_back(c.get<std::string>());
    }
    const auto& attrs = member(obj, "attrs");
    if (!attrs.is_object()) throw ProtocolError("\"attrs\" must be an object");
    for (const auto& [k, v] : attrs.items()) node.attrs.emplace(k, attr_from(v));
    return node;
}

Vec2 point_from(const json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ProtocolError("positions are [x, y] pairs");
    return Vec2{v[0].get<double>(), v[1].get<double>()};
}

std::map<std::string, Vec2> positions_from(const json& obj) {
    if (!obj.is_object()) throw ProtocolError("\"positions\" must be an object");
    std::map<std::string, Vec2> out;
    for (const auto& [id, p] : obj.items()) out.emplace(id, point_from(p));
    return out;
}

EventPayload payload_from(const json& e) {
    const auto type = string_member(e, "type");
    if (type == "node_added") return NodeAdded{node_from(member(e, "node"))};
    if (type == "edge_added")
        return EdgeAdded{string_member(e, "id"), string_member(e, "from"), string_member(e, "to")};
    if (type == "attr_changed")
        return AttrChanged{string_member(e, "node_id"), string_member(e, "key"), attr_from(member(e, "value"))};
    if (type == "node_removed") return NodeRemoved{string_member(e, "id")};
    if (type == "edge_removed") return EdgeRemoved{string_member(e, "id")};
    if (type == "positions") return PositionsUpdate{positions_from(member(e, "positions"))};
    throw ProtocolError("unknown event type '" + type + "'");
}

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

std::string event_to_json(const GraphEvent& event) {
    JsonWriter w;
    write_event(w, event, nullptr);
    return w.take();
}

std::string wire_event_to_json(const GraphEvent& event, std::string_view session) {
    JsonWriter w;
    write_event(w, event, &session);
    return w.take();
}

GraphEvent event_from_json(std::string_view line) {
    const auto doc = parse(line);
    GraphEvent event;
    event.seq = int_member(doc, "seq");
    event.payload = payload_from(member(doc, "event"));
    return event;
}

std::vector<GraphEvent> events_from_jsonl(std::string_view text) {
    std::vector<GraphEvent> events;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        events.push_back(event_from_json(text.substr(start, end - start)));
        start = end + 1;
    }
    return events;
}

std::string node_to_json(const GraphNode& node) {
    JsonWriter w;
    write_node(w, node);
    return w.take();
}

std::string snapshot_to_json(const GraphSnapshot& snapshot) {
    JsonWriter w;
    w.begin_object();
    w.key("last_seq").value(snapshot.last_seq);
    w.key("nodes").begin_array();
    for (const auto& [id, node] : snapshot.nodes) write_node(w, node);
    w.end_array();
    w.key("edges").begin_array();
    for (const auto& [id, edge] : snapshot.edges) {
        w.begin_object();
        w.key("id").value(edge.id).key("from").value(edge.from).key("to").value(edge.to);
        w.key("added_seq").value(edge.added_seq);
        w.end_object();
    }
    w.end_array();
    w.key("positions");
    write_positions(w, snapshot.positions);
    w.end_object();
    return w.take();
}

GraphSnapshot snapshot_from_json(std::string_view text) {
    const auto doc = parse(text);
    GraphSnapshot s;
    s.last_seq = int_member(doc, "last_seq");
    const auto& nodes = member(doc, "nodes");
    const auto& edges = member(doc, "edges");
    if (!nodes.is_array() || !edges.is_array()) throw ProtocolError("nodes/edges must be arrays");
    for (const auto& n : nodes) {
        auto node = node_from(n);
        s.nodes.emplace(node.id, std::move(node));
    }
    for (const auto& e : edges) {
        GraphEdge edge{string_member(e, "id"), string_member(e, "from"), string_member(e, "to"),
                       int_member(e, "added_seq")};
        s.edges.emplace(edge.id, std::move(edge));
    }
    s.positions = positions_from(member(doc, "positions"));
    return s;
}

}  // namespace plexus
