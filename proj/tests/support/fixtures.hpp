#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "plexus/ingest.hpp"

namespace fixture {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string data(const std::string& relative) {
    return std::string(PLEXUS_TEST_DATA) + "/" + relative;
}

// Canned search response: {"status", "headers", "body" (JSON) | "body_text" (raw)}.
inline plexus::HttpResponse http_response(const std::string& name) {
    const auto j = nlohmann::json::parse(read_file(data("live/" + name)));
    plexus::HttpResponse r;
    r.status = j.at("status").get<int>();
    for (const auto& [k, v] : j.at("headers").items()) r.headers[k] = v.get<std::string>();
    if (j.contains("body_text"))
        r.body = j.at("body_text").get<std::string>();
    else
        r.body = j.at("body").dump();
    return r;
}

}  // namespace fixture
