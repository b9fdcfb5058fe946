#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "plexus/emotion.hpp"
#include "plexus/graph.hpp"
#include "plexus/ingest.hpp"
#include "plexus/layout.hpp"
#include "plexus/style.hpp"

namespace plexus {

enum class SourceKind : std::uint8_t { replay, live };

std::string_view to_string(SourceKind k) noexcept;
std::optional<SourceKind> parse_source_kind(std::string_view s) noexcept;

// Bundled data directory: $PLEXUS_DATA_DIR when set, otherwise the build-time
// default.
std::filesystem::path data_dir();
std::filesystem::path default_lexicon_path();
std::filesystem::path default_corpus_path();

struct SessionConfig {
    TopicQuery topic_a{TopicId::A, {}};
    TopicQuery topic_b{TopicId::B, {}};
    SourceKind source = SourceKind::replay;
    std::filesystem::path corpus;                     // replay only
    std::uint64_t seed = 0;
    std::filesystem::path lexicon;                    // empty: bundled lexicon
    std::optional<std::filesystem::path> stylesheet;  // unset: default theme
    std::chrono::milliseconds tick_interval{1000};
    std::size_t replay_batch_size = ReplaySource::kDefaultBatchSize;
    LayoutParams layout;

    // Topic checks only (ValidationError); file checks happen at startup.
    void validate() const;
};

// Live-mode collaborators. Tests inject canned transports here.
struct LiveDeps {
    std::optional<Credentials> credentials;  // unset: read from the environment
    HttpTransport transport;                 // unset: real HTTPS
    std::chrono::milliseconds poll_interval = LiveSource::kDefaultPollInterval;
    LiveSource::Clock clock = std::chrono::steady_clock::now;
};

// Append-only, seq-ordered log shared between the session's writer and any
// number of readers.
class EventLog {
public:
    void append(const std::vector<GraphEvent>& events, std::string_view session);

    std::size_t size() const;
    std::vector<GraphEvent> events() const;
    std::vector<GraphEvent> events_from(std::size_t from) const;
    std::vector<std::string> wire_lines() const;

    // Blocks until more than `from` events exist, the log is closed, or the
    // timeout expires; returns the wire lines at index >= from.
    std::vector<std::string> wait_from(std::size_t from, std::chrono::milliseconds timeout) const;

    void close();
    bool closed() const;

private:
    mutable std::mutex mutex_;
    mutable std::condition_variable changed_;
    std::vector<GraphEvent> events_;
    std::vector<std::string> wire_;
    bool closed_ = false;
};

enum class SessionState : std::uint8_t { running, drained, finished, failed };
std::string_view to_string(SessionState s) noexcept;

struct TopicTally {
    std::size_t ingested = 0;    // attached as leaves
    std::size_t zero_score = 0;  // matched but no emotion evidence
    std::size_t duplicates = 0;
    std::array<std::size_t, kEmotionCount> by_emotion{};
};

struct SessionStats {
    std::size_t read = 0;       // tweets pulled from sources
    std::size_t unmatched = 0;  // matched neither topic
    std::size_t rate_limited = 0;   // polls answered with 429
    std::size_t source_errors = 0;  // malformed responses, skipped
    std::size_t layout_steps = 0;
    std::array<TopicTally, 2> topics{};
};

// One analysis session. Exactly one thread calls tick(); every other method
// is safe from any thread.
class Session {
public:
    // Loads lexicon, stylesheet and sources, then emits the initial topology
    // (seq 0..21). Throws ValidationError, StartupError, AuthConfigError or a
    // StyleError from the stylesheet.
    Session(std::string id, SessionConfig config, LiveDeps live = {});
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const noexcept { return id_; }
    const SessionConfig& config() const noexcept { return config_; }

    // One pipeline step: pull, match, score, attach, one layout step and a
    // positions event. Returns the events appended by this call.
    std::vector<GraphEvent> tick();

    SessionState state() const;
    bool done() const;  // finished or failed
    std::string failure() const;

    GraphSnapshot snapshot() const;
    SessionStats stats() const;
    const EventLog& log() const noexcept { return log_; }
    std::string stylesheet_css() const { return stylesheet_css_; }
    const std::vector<StyleRule>& stylesheet() const noexcept { return stylesheet_; }

    // JSON detail record for a live node. Throws NotFoundError.
    std::string node_detail(const std::string& node_id) const;

    // Background ticking at the configured interval until done or stopped.
    void start_worker();
    void stop_worker();

private:
    struct TweetRecord {
        Tweet tweet;
        TopicId topic;
        EmotionScores scores;
    };

    void emit(const std::vector<GraphEvent>& events);  // apply + log; caller holds mutex_
    void ingest_batch(const Batch& batch);

    std::string id_;
    SessionConfig config_;
    Lexicon lexicon_;
    std::vector<StyleRule> stylesheet_;
    std::string stylesheet_css_;
    std::vector<std::unique_ptr<TweetSource>> sources_;
    std::vector<bool> exhausted_;

    mutable std::mutex mutex_;
    GraphSnapshot snapshot_;
    LayoutState layout_;
    std::array<std::set<std::string>, 2> seen_;
    std::map<std::string, TweetRecord> tweets_;  // by node id, live leaves only
    SessionStats stats_;
    SessionState state_ = SessionState::running;
    std::size_t drain_steps_ = 0;
    std::string failure_;

    EventLog log_;

    std::jthread worker_;
};

// Thread-safe registry. Ids are "s1", "s2", ... in creation order.
class SessionManager {
public:
    std::shared_ptr<Session> create(SessionConfig config, LiveDeps live = {});
    std::shared_ptr<Session> get(const std::string& id) const;  // throws NotFoundError
    std::vector<std::string> ids() const;
    void stop_all();

private:
    std::mutex create_mutex_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::size_t next_ = 1;
};

// ---- analyze --------------------------------------------------------------

// {"status":"OK","language":"english","docEmotions":{...},"finalEmotion":"joy"}
std::string analyze_json(std::string_view text, const Lexicon& lexicon);

// {"anger":0.000000,...} in canonical key order, six decimals.
std::string doc_emotions_json(const EmotionScores& scores);

// ---- headless -------------------------------------------------------------

struct HeadlessResult {
    std::vector<std::string> lines;  // wire events, seq order
    GraphSnapshot snapshot;
    SessionStats stats;
    SessionState state = SessionState::finished;
    std::size_t ticks = 0;
};

// Runs a replay session to drain plus layout convergence, without sleeping.
// Throws ValidationError for live sources.
HeadlessResult run_headless(const SessionConfig& config);

// JSONL text: lines joined by '\n', no trailing blank line.
std::string to_jsonl(const std::vector<std::string>& lines);

std::string summary_text(const SessionConfig& config, const SessionStats& stats,
                         const GraphSnapshot& snapshot);

}  // namespace plexus
