#include "plexus/server.hpp"

#include <sys/socket.h>

#include <charconv>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <json.hpp>

#include "plexus/errors.hpp"
#include "plexus/event_codec.hpp"
#include "plexus/json_writer.hpp"

namespace plexus {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace asio = boost::asio;
using tcp = asio::ip::tcp;
using nlohmann::json;

namespace {

std::vector<std::string_view> split_path(std::string_view target) {
    if (auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < target.size()) {
        if (target[i] == '/') {
            ++i;
            continue;
        }
        auto j = target.find('/', i);
        if (j == std::string_view::npos) j = target.size();
        parts.push_back(target.substr(i, j - i));
        i = j;
    }
    return parts;
}

ApiResponse json_error(int status, std::string_view message) {
    JsonWriter w;
    w.begin_object().key("error").value(message).end_object();
    return {status, "application/json", w.take()};
}

TopicQuery topic_from_json(const json& j, TopicId id, const TopicQuery& fallback) {
    TopicQuery q = fallback;
    q.topic = id;
    if (j.is_string()) {
        q.phrase = j.get<std::string>();
    } else if (j.is_object()) {
        if (j.contains("phrase")) q.phrase = j.at("phrase").get<std::string>();
        if (j.contains("lang")) q.lang = j.at("lang").get<std::string>();
        if (j.contains("exclude_retweets")) q.exclude_retweets = j.at("exclude_retweets").get<bool>();
    } else {
        throw ValidationError("topic must be a string or an object");
    }
    return q;
}

std::uint64_t seed_from_json(const json& j) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        auto v = j.get<std::int64_t>();
        if (v < 0) throw ValidationError("seed must be non-negative");
        return static_cast<std::uint64_t>(v);
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
            throw ValidationError("seed must be a 64-bit unsigned integer");
        return v;
    }
    throw ValidationError("seed must be a 64-bit unsigned integer");
}

}  // namespace

std::string url_decode(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            int hi = hex(s[i + 1]), lo = hex(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(s[i]);
    }
    return out;
}

SessionConfig session_config_from_json(std::string_view body, const SessionConfig& defaults) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("session config must be a JSON object");

    SessionConfig c = defaults;
    try {
        if (!j.contains("topic_a") || !j.contains("topic_b"))
            throw ValidationError("topic_a and topic_b are required");
        c.topic_a = topic_from_json(j.at("topic_a"), TopicId::A, defaults.topic_a);
        c.topic_b = topic_from_json(j.at("topic_b"), TopicId::B, defaults.topic_b);
        if (j.contains("lang")) c.topic_a.lang = c.topic_b.lang = j.at("lang").get<std::string>();
        if (j.contains("exclude_retweets"))
            c.topic_a.exclude_retweets = c.topic_b.exclude_retweets =
                j.at("exclude_retweets").get<bool>();
        if (j.contains("source")) {
            auto kind = parse_source_kind(j.at("source").get<std::string>());
            if (!kind) throw ValidationError("source must be replay or live");
            c.source = *kind;
        }
        if (j.contains("corpus")) c.corpus = j.at("corpus").get<std::string>();
        if (j.contains("seed")) c.seed = seed_from_json(j.at("seed"));
        if (j.contains("lexicon")) c.lexicon = j.at("lexicon").get<std::string>();
        if (j.contains("stylesheet")) c.stylesheet = j.at("stylesheet").get<std::string>();
        if (j.contains("tick_ms")) {
            auto ms = j.at("tick_ms").get<std::int64_t>();
            if (ms < 0) throw ValidationError("tick_ms must be non-negative");
            c.tick_interval = std::chrono::milliseconds(ms);
        }
        if (j.contains("layout")) {
            const auto& l = j.at("layout");
            if (l.contains("side")) c.layout.side = l.at("side").get<double>();
            if (l.contains("spring")) c.layout.spring = l.at("spring").get<double>();
            if (l.contains("cooling")) c.layout.cooling = l.at("cooling").get<double>();
            if (l.contains("initial_temperature"))
                c.layout.initial_temperature = l.at("initial_temperature").get<double>();
            if (l.contains("epsilon")) c.layout.epsilon = l.at("epsilon").get<double>();
            if (l.contains("max_iters")) c.layout.max_iters = l.at("max_iters").get<std::size_t>();
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad session config: ") + e.what());
    }
    c.layout.validate();
    c.validate();
    return c;
}

std::optional<std::string> events_route(std::string_view target) {
    auto p = split_path(target);
    if (p.size() == 4 && p[0] == "api" && p[1] == "sessions" && p[3] == "events")
        return url_decode(p[2]);
    return std::nullopt;
}

ApiResponse handle_api_request(SessionManager& sessions, const ServerOptions& options,
                               std::string_view method, std::string_view target,
                               std::string_view body) {
    const auto p = split_path(target);
    if (p.size() < 2 || p[0] != "api" || p[1] != "sessions") return json_error(404, "no such route");

    try {
        if (p.size() == 2) {
            if (method == "POST") {
                auto config = session_config_from_json(body, options.defaults);
                auto session = sessions.create(std::move(config), options.live);
                if (options.start_workers) session->start_worker();
                JsonWriter w;
                w.begin_object().key("session_id").value(session->id()).end_object();
                return {201, "application/json", w.take()};
            }
            if (method == "GET") {
                JsonWriter w;
                w.begin_object().key("sessions").begin_array();
                for (const auto& id : sessions.ids()) w.value(id);
                w.end_array().end_object();
                return {200, "application/json", w.take()};
            }
            return json_error(405, "method not allowed");
        }

        if (method != "GET") return json_error(405, "method not allowed");
        auto session = sessions.get(url_decode(p[2]));

        if (p.size() == 3) {
            const auto snap = session->snapshot();
            JsonWriter w;
            w.begin_object()
                .key("session_id").value(session->id())
                .key("state").value(to_string(session->state()))
                .key("last_seq").value(static_cast<std::int64_t>(snap.last_seq));
            if (session->state() == SessionState::failed)
                w.key("failure").value(session->failure());
            w.end_object();
            return {200, "application/json", w.take()};
        }
        if (p.size() == 4 && p[3] == "snapshot")
            return {200, "application/json", snapshot_to_json(session->snapshot())};
        if (p.size() == 4 && p[3] == "stylesheet")
            return {200, "text/css; charset=utf-8", session->stylesheet_css()};
        if (p.size() == 4 && p[3] == "events")
            return json_error(426, "WebSocket upgrade required");
        if (p.size() == 5 && p[3] == "nodes")
            return {200, "application/json", session->node_detail(url_decode(p[4]))};
        return json_error(404, "no such route");
    } catch (const NotFoundError& e) {
        return json_error(404, e.what());
    } catch (const Error& e) {
        // Validation, startup, credential and stylesheet failures.
        return json_error(400, e.what());
    }
}

// ---- transport ------------------------------------------------------------

struct HttpServer::Impl {
    asio::io_context ioc{1};
    tcp::acceptor acceptor{ioc};
};

struct HttpServer::Connection {
    tcp::socket socket;
    std::atomic<bool> done{false};
    std::jthread thread;

    explicit Connection(tcp::socket s) : socket(std::move(s)) {}
};

HttpServer::HttpServer(SessionManager& sessions, ServerOptions options)
    : sessions_(sessions), options_(std::move(options)), impl_(std::make_unique<Impl>()) {}

HttpServer::~HttpServer() {
    stop();
    reap(true);
}

void HttpServer::start() {
    beast::error_code ec;
    auto address = asio::ip::make_address(options_.host, ec);
    if (ec) throw BindError("invalid listen address '" + options_.host + "'");
    tcp::endpoint endpoint{address, options_.port};
    auto& acc = impl_->acceptor;
    const auto where = options_.host + ":" + std::to_string(options_.port);
    acc.open(endpoint.protocol(), ec);
    if (!ec) acc.set_option(asio::socket_base::reuse_address(true), ec);
    if (!ec) acc.bind(endpoint, ec);
    if (!ec) acc.listen(asio::socket_base::max_listen_connections, ec);
    if (ec) throw BindError("cannot listen on " + where + ": " + ec.message());
    bound_port_ = acc.local_endpoint().port();
}

void HttpServer::run() {
    auto& acc = impl_->acceptor;
    while (!stopping_.load()) {
        tcp::socket socket{impl_->ioc};
        beast::error_code ec;
        acc.accept(socket, ec);
        if (stopping_.load()) break;
        if (ec) continue;
        reap(false);
        std::lock_guard lock(connections_mutex_);
        auto conn = std::make_unique<Connection>(std::move(socket));
        const int id = static_cast<int>(connections_.size());
        connections_.push_back(std::move(conn));
        connections_.back()->thread = std::jthread([this, id] { serve(id); });
    }
}

void HttpServer::stop() {
    if (stopping_.exchange(true)) return;
    auto& acc = impl_->acceptor;
    // shutdown() wakes a thread blocked in accept(); close() alone does not.
    if (acc.is_open()) ::shutdown(acc.native_handle(), SHUT_RDWR);
    beast::error_code ec;
    acc.close(ec);
    std::lock_guard lock(connections_mutex_);
    for (auto& c : connections_)
        if (!c->done.load()) ::shutdown(c->socket.native_handle(), SHUT_RDWR);
}

void HttpServer::reap(bool all) {
    std::vector<std::unique_ptr<Connection>> finished;
    {
        std::lock_guard lock(connections_mutex_);
        if (all) {
            finished.swap(connections_);
        } else {
            // Only whole-vector reaping keeps connection ids stable.
            bool any_live = false;
            for (auto& c : connections_) any_live = any_live || !c->done.load();
            if (!any_live) finished.swap(connections_);
        }
    }
    for (auto& c : finished)
        if (c->thread.joinable()) c->thread.join();
}

namespace {

void stream_events(websocket::stream<tcp::socket&>& ws, const Session& session,
                   const std::atomic<bool>& stopping) {
    ws.text(true);
    std::size_t next = 0;
    const auto& log = session.log();
    while (!stopping.load()) {
        auto lines = log.wait_from(next, std::chrono::milliseconds(200));
        for (const auto& line : lines) ws.write(asio::buffer(line));
        next += lines.size();
        if (lines.empty() && log.closed() && next >= log.size()) break;
    }
    beast::error_code ec;
    ws.close(websocket::close_code::normal, ec);
}

}  // namespace

void HttpServer::serve(int id) {
    Connection* conn;
    {
        std::lock_guard lock(connections_mutex_);
        conn = connections_[static_cast<std::size_t>(id)].get();
    }
    auto& socket = conn->socket;
    try {
        beast::flat_buffer buffer;
        for (;;) {
            http::request<http::string_body> req;
            http::read(socket, buffer, req);

            const std::string target(req.target());
            if (websocket::is_upgrade(req)) {
                auto sid = events_route(target);
                std::shared_ptr<Session> session;
                if (sid) {
                    try {
                        session = sessions_.get(*sid);
                    } catch (const NotFoundError&) {
                    }
                }
                if (!session) {
                    http::response<http::string_body> res{http::status::not_found, req.version()};
                    res.set(http::field::content_type, "application/json");
                    res.body() = json_error(404, sid ? "no such session" : "no such route").body;
                    res.prepare_payload();
                    http::write(socket, res);
                    break;
                }
                websocket::stream<tcp::socket&> ws{socket};
                ws.accept(req);
                stream_events(ws, *session, stopping_);
                break;
            }

            auto api = handle_api_request(sessions_, options_, std::string(req.method_string()),
                                          target, req.body());
            http::response<http::string_body> res{static_cast<http::status>(api.status),
                                                  req.version()};
            res.set(http::field::server, "plexus");
            res.set(http::field::content_type, api.content_type);
            res.keep_alive(req.keep_alive());
            res.body() = std::move(api.body);
            res.prepare_payload();
            http::write(socket, res);
            if (!req.keep_alive()) break;
        }
    } catch (const std::exception&) {
        // Peer went away or sent garbage; the connection is simply dropped.
    }
    beast::error_code ec;
    socket.shutdown(tcp::socket::shutdown_both, ec);
    conn->done.store(true);
}

}  // namespace plexus
