#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plexus/graph.hpp"

namespace plexus {

// Event log line: {"seq":n,"event":{"type":...,...}}
std::string event_to_json(const GraphEvent& event);

// Wire form adds the owning session: {"seq":n,"session":"s1","event":{...}}
std::string wire_event_to_json(const GraphEvent& event, std::string_view session);

// Accepts either form; the session field, when present, is ignored.
// Throws ProtocolError on schema violations.
GraphEvent event_from_json(std::string_view line);

// Parses a JSONL log (either form); blank lines are rejected.
std::vector<GraphEvent> events_from_jsonl(std::string_view text);

std::string node_to_json(const GraphNode& node);

// {"last_seq":n,"nodes":[...],"edges":[...],"positions":{id:[x,y]}}
std::string snapshot_to_json(const GraphSnapshot& snapshot);
GraphSnapshot snapshot_from_json(std::string_view text);

}  // namespace plexus
