// plexus command-line entry point: `analyze` scores one text, `run` starts a
// session either headless (log to file) or behind the HTTP/WebSocket API.

#include <charconv>
#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "plexus/errors.hpp"
#include "plexus/server.hpp"
#include "plexus/session.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBind = 3;

struct RunOptions {
    std::string topic_a, topic_b;
    std::string source = "replay";
    std::string corpus, lexicon, stylesheet;
    std::uint64_t seed = 0;
    std::string listen = "127.0.0.1:8080";
    bool headless = false;
    std::string out;
    long tick_ms = 1000;
};

int run_analyze(const std::string& text, const std::string& lexicon_path) {
    try {
        const auto path = lexicon_path.empty() ? plexus::default_lexicon_path()
                                               : std::filesystem::path(lexicon_path);
        const auto lexicon = plexus::load_lexicon_file(path);
        std::cout << plexus::analyze_json(text, lexicon) << '\n';
        return 0;
    } catch (const plexus::Error& e) {
        std::cerr << "plexus: " << e.what() << '\n';
        return kExitConfig;
    }
}

std::pair<std::string, unsigned short> split_listen(const std::string& s) {
    const auto colon = s.rfind(':');
    if (colon == std::string::npos) throw plexus::ValidationError("--listen must be host:port");
    const auto port_text = s.substr(colon + 1);
    unsigned port = 0;
    auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || p != port_text.data() + port_text.size() || port > 65535)
        throw plexus::ValidationError("--listen port must be 0..65535");
    return {s.substr(0, colon), static_cast<unsigned short>(port)};
}

plexus::SessionConfig make_config(const RunOptions& o) {
    plexus::SessionConfig c;
    c.topic_a = {plexus::TopicId::A, o.topic_a};
    c.topic_b = {plexus::TopicId::B, o.topic_b};
    auto kind = plexus::parse_source_kind(o.source);
    if (!kind) throw plexus::ValidationError("--source must be replay or live");
    c.source = *kind;
    if (c.source == plexus::SourceKind::replay)
        c.corpus = o.corpus.empty() ? plexus::default_corpus_path() : std::filesystem::path(o.corpus);
    c.seed = o.seed;
    if (!o.lexicon.empty()) c.lexicon = o.lexicon;
    if (!o.stylesheet.empty()) c.stylesheet = o.stylesheet;
    if (o.tick_ms < 0) throw plexus::ValidationError("--tick-ms must be non-negative");
    c.tick_interval = std::chrono::milliseconds(o.tick_ms);
    c.validate();
    return c;
}

int run_headless(const plexus::SessionConfig& config, const std::string& out) {
    auto result = plexus::run_headless(config);
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) {
        std::cerr << "plexus: cannot write " << out << '\n';
        return kExitConfig;
    }
    f << plexus::to_jsonl(result.lines);
    f.close();
    std::cout << plexus::summary_text(config, result.stats, result.snapshot);
    return result.state == plexus::SessionState::failed ? 1 : 0;
}

int run_served(const plexus::SessionConfig& config, const std::string& listen) {
    // Signals go to a dedicated waiter thread; every other thread inherits
    // the blocked mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    const auto [host, port] = split_listen(listen);
    plexus::SessionManager sessions;
    plexus::ServerOptions options;
    options.host = host;
    options.port = port;
    options.defaults = config;
    plexus::HttpServer server(sessions, options);
    try {
        server.start();
    } catch (const plexus::BindError& e) {
        std::cerr << "plexus: " << e.what() << '\n';
        return kExitBind;
    }

    auto session = sessions.create(config);
    session->start_worker();
    std::cout << "listening on http://" << host << ':' << server.port() << "  session "
              << session->id() << std::endl;

    std::jthread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    server.run();
    sessions.stop_all();
    // run() only returns after stop(); the waiter has finished by then.
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"plexus: two-topic emotion graph for short social-media posts"};
    app.require_subcommand(1);

    std::string text, analyze_lexicon;
    auto* analyze = app.add_subcommand("analyze", "score one text and print the emotion record");
    analyze->add_option("--text", text, "text to analyze")->required();
    analyze->add_option("--lexicon", analyze_lexicon, "lexicon file (default: bundled)");

    RunOptions o;
    auto* run = app.add_subcommand("run", "start an analysis session");
    run->add_option("--topic-a", o.topic_a, "first topic phrase")->required();
    run->add_option("--topic-b", o.topic_b, "second topic phrase")->required();
    run->add_option("--source", o.source, "tweet source")->check(CLI::IsMember({"replay", "live"}));
    run->add_option("--corpus", o.corpus, "replay corpus (JSONL, default: bundled)");
    run->add_option("--lexicon", o.lexicon, "lexicon file (default: bundled)");
    run->add_option("--stylesheet", o.stylesheet, "stylesheet (default: built-in theme)");
    run->add_option("--seed", o.seed, "layout seed")->required();
    run->add_option("--listen", o.listen, "host:port for the HTTP API");
    run->add_flag("--headless", o.headless, "run to convergence and write the event log");
    run->add_option("--out", o.out, "event log output path (headless)");
    run->add_option("--tick-ms", o.tick_ms, "pipeline tick interval in milliseconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (*analyze) return run_analyze(text, analyze_lexicon);

    try {
        const auto config = make_config(o);
        if (o.headless) {
            if (o.out.empty()) throw plexus::ValidationError("--headless requires --out");
            return run_headless(config, o.out);
        }
        return run_served(config, o.listen);
    } catch (const plexus::AuthError& e) {
        std::cerr << "plexus: " << e.what() << '\n';
        return 1;
    } catch (const plexus::Error& e) {
        std::cerr << "plexus: " << e.what() << '\n';
        return kExitConfig;
    }
}
