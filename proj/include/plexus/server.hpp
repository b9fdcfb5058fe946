#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "plexus/session.hpp"

namespace plexus {

struct ServerOptions {
    std::string host = "127.0.0.1";
    unsigned short port = 8080;   // 0 picks a free port
    SessionConfig defaults;       // fills fields a POSTed config omits
    LiveDeps live;
    bool start_workers = true;    // tick sessions in the background
};

// Builds a session config from a POST /api/sessions body. Recognised keys:
// topic_a, topic_b, source, corpus, seed, lexicon, stylesheet, tick_ms,
// exclude_retweets, lang. Throws ValidationError.
SessionConfig session_config_from_json(std::string_view body, const SessionConfig& defaults);

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

// Transport-independent request handling for every non-streaming route.
ApiResponse handle_api_request(SessionManager& sessions, const ServerOptions& options,
                               std::string_view method, std::string_view target,
                               std::string_view body);

// Matches GET /api/sessions/{id}/events; returns the session id.
std::optional<std::string> events_route(std::string_view target);

std::string url_decode(std::string_view s);

// Blocking HTTP/1.1 + WebSocket server, one thread per connection.
class HttpServer {
public:
    HttpServer(SessionManager& sessions, ServerOptions options);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds and listens. Throws BindError.
    void start();
    unsigned short port() const noexcept { return bound_port_; }

    // Accepts until stop() is called.
    void run();
    void stop();

private:
    struct Impl;
    struct Connection;

    void serve(int id);
    void reap(bool all);

    SessionManager& sessions_;
    ServerOptions options_;
    std::unique_ptr<Impl> impl_;
    unsigned short bound_port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex connections_mutex_;
    std::vector<std::unique_ptr<Connection>> connections_;
};

}  // namespace plexus
