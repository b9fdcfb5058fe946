#include "plexus/session.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "plexus/errors.hpp"
#include "plexus/event_codec.hpp"
#include "plexus/json_writer.hpp"

#ifndef PLEXUS_DEFAULT_DATA_DIR
#define PLEXUS_DEFAULT_DATA_DIR "data"
#endif

namespace plexus {

namespace {

constexpr int kScoreDecimals = 6;

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StartupError(path.string(), std::string("cannot read ") + what);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void require_file(const std::filesystem::path& path, const char* what) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw StartupError(path.string(), std::string(what) + " not found");
}

std::size_t topic_index(TopicId t) { return t == TopicId::A ? 0 : 1; }

// The hub a freshly added node is placed next to.
std::optional<std::string> attachment_of(const GraphNode& node) {
    switch (node.kind) {
        case NodeKind::topic: return std::nullopt;
        case NodeKind::emotion: {
            const auto colon = node.id.find(':');
            const auto topic = parse_topic(std::string_view(node.id).substr(0, colon));
            if (!topic) return std::nullopt;
            return topic_node_id(*topic);
        }
        case NodeKind::tweet: {
            auto it = node.attrs.find(kAttrTopic);
            if (it == node.attrs.end() || node.classes.empty()) return std::nullopt;
            const auto* name = std::get_if<std::string>(&it->second);
            const auto topic = name ? parse_topic(*name) : std::nullopt;
            const auto emotion = parse_emotion(node.classes.front());
            if (!topic || !emotion) return std::nullopt;
            return emotion_node_id(*topic, *emotion);
        }
    }
    return std::nullopt;
}

std::int64_t int_attr(const GraphNode& node, const char* key) {
    auto it = node.attrs.find(key);
    if (it == node.attrs.end()) return 0;
    const auto* v = std::get_if<std::int64_t>(&it->second);
    return v ? *v : 0;
}

}  // namespace

std::string_view to_string(SourceKind k) noexcept { return k == SourceKind::replay ? "replay" : "live"; }

std::optional<SourceKind> parse_source_kind(std::string_view s) noexcept {
    if (s == "replay") return SourceKind::replay;
    if (s == "live") return SourceKind::live;
    return std::nullopt;
}

std::string_view to_string(SessionState s) noexcept {
    switch (s) {
        case SessionState::running: return "running";
        case SessionState::drained: return "drained";
        case SessionState::finished: return "finished";
        case SessionState::failed: return "failed";
    }
    return "running";
}

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("PLEXUS_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return PLEXUS_DEFAULT_DATA_DIR;
}

std::filesystem::path default_lexicon_path() { return data_dir() / "lexicon" / "emotions.lex"; }
std::filesystem::path default_corpus_path() { return data_dir() / "corpus" / "iphone7-vs-s7.jsonl"; }

void SessionConfig::validate() const {
    if (topic_a.topic != TopicId::A || topic_b.topic != TopicId::B)
        throw ValidationError("topic_a must carry id A and topic_b id B");
    validate_topic_pair(topic_a, topic_b);
    layout.validate();
}

// ---- EventLog -------------------------------------------------------------------

void EventLog::append(const std::vector<GraphEvent>& events, std::string_view session) {
    if (events.empty()) return;
    std::vector<std::string> lines;
    lines.reserve(events.size());
    for (const auto& e : events) lines.push_back(wire_event_to_json(e, session));
    {
        std::lock_guard lock(mutex_);
        events_.insert(events_.end(), events.begin(), events.end());
        wire_.insert(wire_.end(), std::make_move_iterator(lines.begin()),
                     std::make_move_iterator(lines.end()));
    }
    changed_.notify_all();
}

std::size_t EventLog::size() const {
    std::lock_guard lock(mutex_);
    return events_.size();
}

std::vector<GraphEvent> EventLog::events() const {
    std::lock_guard lock(mutex_);
    return events_;
}

std::vector<GraphEvent> EventLog::events_from(std::size_t from) const {
    std::lock_guard lock(mutex_);
    if (from >= events_.size()) return {};
    return {events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end()};
}

std::vector<std::string> EventLog::wire_lines() const {
    std::lock_guard lock(mutex_);
    return wire_;
}

std::vector<std::string> EventLog::wait_from(std::size_t from, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mutex_);
    changed_.wait_for(lock, timeout, [&] { return wire_.size() > from || closed_; });
    if (from >= wire_.size()) return {};
    return {wire_.begin() + static_cast<std::ptrdiff_t>(from), wire_.end()};
}

void EventLog::close() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    changed_.notify_all();
}

bool EventLog::closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
}

// ---- Session --------------------------------------------------------------------

Session::Session(std::string id, SessionConfig config, LiveDeps live)
    : id_(std::move(id)),
      config_(std::move(config)),
      layout_([&] {
          config_.validate();
          auto params = config_.layout;
          params.seed = config_.seed;
          config_.layout = params;
          return params;
      }()) {
    const auto lexicon_path = config_.lexicon.empty() ? default_lexicon_path() : config_.lexicon;
    require_file(lexicon_path, "lexicon");
    lexicon_ = load_lexicon_file(lexicon_path);

    if (config_.stylesheet) {
        require_file(*config_.stylesheet, "stylesheet");
        stylesheet_css_ = read_file(*config_.stylesheet, "stylesheet");
    } else {
        stylesheet_css_ = std::string(default_theme_css());
    }
    stylesheet_ = parse_stylesheet(stylesheet_css_);

    if (config_.source == SourceKind::replay) {
        const auto corpus = config_.corpus.empty() ? default_corpus_path() : config_.corpus;
        require_file(corpus, "corpus");
        sources_.push_back(ReplaySource::from_file(corpus, config_.replay_batch_size));
    } else {
        auto credentials = live.credentials ? *live.credentials : Credentials::from_env();
        auto transport = live.transport ? live.transport : make_http_transport();
        for (const auto* q : {&config_.topic_a, &config_.topic_b})
            sources_.push_back(std::make_unique<LiveSource>(*q, credentials, transport,
                                                            live.poll_interval, live.clock));
    }
    exhausted_.assign(sources_.size(), false);

    std::lock_guard lock(mutex_);
    emit(init_session_graph(config_.topic_a, config_.topic_b, 0));
}

Session::~Session() { stop_worker(); }

void Session::emit(const std::vector<GraphEvent>& events) {
    for (const auto& e : events) {
        apply_event_in_place(snapshot_, e);
        if (const auto* added = std::get_if<NodeAdded>(&e.payload)) {
            layout_.place_new_node(added->node.id, attachment_of(added->node));
        } else if (const auto* removed = std::get_if<NodeRemoved>(&e.payload)) {
            layout_.forget(removed->id);
            tweets_.erase(removed->id);
        }
    }
    log_.append(events, id_);
}

void Session::ingest_batch(const Batch& batch) {
    for (const auto& tweet : batch.tweets) {
        ++stats_.read;
        const auto topics = tweet.topic ? std::vector<TopicId>{*tweet.topic}
                                        : match_topic(tweet, config_.topic_a, config_.topic_b).topics();
        if (topics.empty()) {
            ++stats_.unmatched;
            continue;
        }
        const auto scores = score_text(tweet.text, lexicon_);
        for (auto topic : topics) {
            auto& tally = stats_.topics[topic_index(topic)];
            if (!seen_[topic_index(topic)].insert(tweet.id).second) {
                ++tally.duplicates;
                continue;
            }
            const auto events = ingest_tweet(snapshot_, tweet, topic, scores);
            if (events.empty()) {
                ++tally.zero_score;
                continue;
            }
            ++tally.ingested;
            ++tally.by_emotion[index_of(final_emotion(scores))];
            auto stamped = tweet;
            stamped.topic = topic;
            tweets_.insert_or_assign(tweet_node_id(topic, tweet.id), TweetRecord{std::move(stamped), topic, scores});
            emit(events);
        }
    }
}

std::vector<GraphEvent> Session::tick() {
    std::lock_guard lock(mutex_);
    if (state_ == SessionState::finished || state_ == SessionState::failed) return {};
    const auto first = log_.size();

    if (state_ == SessionState::running) {
        for (std::size_t i = 0; i < sources_.size(); ++i) {
            if (exhausted_[i]) continue;
            Batch batch;
            try {
                batch = sources_[i]->next_batch();
            } catch (const AuthError& e) {
                state_ = SessionState::failed;
                failure_ = e.what();
                log_.close();
                return log_.events_from(first);
            } catch (const ProtocolError&) {
                ++stats_.source_errors;
                continue;
            }
            if (batch.retry_after) ++stats_.rate_limited;
            if (batch.exhausted) exhausted_[i] = true;
            ingest_batch(batch);
        }
        if (std::all_of(exhausted_.begin(), exhausted_.end(), [](bool b) { return b; }))
            state_ = SessionState::drained;
    }

    const double moved = step(layout_, snapshot_, config_.layout);
    ++stats_.layout_steps;
    PositionsUpdate update;
    for (const auto& [node_id, p] : layout_.positions())
        update.positions.emplace(node_id, Vec2{round_position(p.x), round_position(p.y)});
    emit({GraphEvent{snapshot_.next_seq(), std::move(update)}});

    if (state_ == SessionState::drained) {
        ++drain_steps_;
        if (moved < config_.layout.eps() || drain_steps_ >= config_.layout.max_iters) {
            state_ = SessionState::finished;
            log_.close();
        }
    }

    return log_.events_from(first);
}

SessionState Session::state() const {
    std::lock_guard lock(mutex_);
    return state_;
}

bool Session::done() const {
    const auto s = state();
    return s == SessionState::finished || s == SessionState::failed;
}

std::string Session::failure() const {
    std::lock_guard lock(mutex_);
    return failure_;
}

GraphSnapshot Session::snapshot() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

SessionStats Session::stats() const {
    std::lock_guard lock(mutex_);
    return stats_;
}

std::string Session::node_detail(const std::string& node_id) const {
    std::lock_guard lock(mutex_);
    const auto* node = snapshot_.node(node_id);
    if (node == nullptr) throw NotFoundError("no node '" + node_id + "' in session " + id_);

    JsonWriter w;
    w.begin_object();
    w.key("id").value(node->id);
    w.key("kind").value(to_string(node->kind));
    switch (node->kind) {
        case NodeKind::tweet: {
            const auto& record = tweets_.at(node_id);
            w.key("topic").value(to_string(record.topic));
            w.key("tweet_id").value(record.tweet.id);
            w.key("text").value(record.tweet.text);
            w.key("author").value(record.tweet.author);
            w.key("created_at").value(record.tweet.created_at);
            w.key("lang").value(record.tweet.lang);
            w.key("docEmotions").raw(doc_emotions_json(record.scores));
            w.key("finalEmotion").value(to_string(final_emotion(record.scores)));
            break;
        }
        case NodeKind::emotion: {
            const auto colon = node->id.find(':');
            w.key("topic").value(node->id.substr(0, colon));
            w.key("emotion").value(node->id.substr(colon + 1));
            w.key("total_count").value(int_attr(*node, kAttrTotalCount));
            w.key("live_count").value(snapshot_.live_leaves(node->id));
            break;
        }
        case NodeKind::topic: {
            const auto topic = node->id == topic_node_id(TopicId::A) ? TopicId::A : TopicId::B;
            const auto& query = topic == TopicId::A ? config_.topic_a : config_.topic_b;
            w.key("topic").value(to_string(topic));
            w.key("phrase").value(query.phrase);
            w.key("query").value(build_query(query));
            w.key("skipped").value(stats_.topics[topic_index(topic)].zero_score);
            break;
        }
    }
    w.end_object();
    return w.take();
}

void Session::start_worker() {
    if (worker_.joinable()) return;
    worker_ = std::jthread([this](std::stop_token stop) {
        std::mutex m;
        std::condition_variable_any cv;
        while (!stop.stop_requested() && !done()) {
            tick();
            std::unique_lock lock(m);
            cv.wait_for(lock, stop, config_.tick_interval, [] { return false; });
        }
    });
}

void Session::stop_worker() {
    if (worker_.joinable()) {
        worker_.request_stop();
        worker_.join();
    }
}

// ---- SessionManager -------------------------------------------------------------

std::shared_ptr<Session> SessionManager::create(SessionConfig config, LiveDeps live) {
    // Creation is serialized so ids stay dense: a failed construction does not
    // consume one.
    std::lock_guard create_lock(create_mutex_);
    const auto id = "s" + std::to_string(next_);
    auto session = std::make_shared<Session>(id, std::move(config), std::move(live));
    std::lock_guard lock(mutex_);
    sessions_.emplace(id, session);
    ++next_;
    return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFoundError("no session '" + id + "'");
    return it->second;
}

std::vector<std::string> SessionManager::ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, s] : sessions_) out.push_back(id);
    return out;
}

void SessionManager::stop_all() {
    std::lock_guard lock(mutex_);
    for (auto& [id, s] : sessions_) s->stop_worker();
}

// ---- analyze / headless ---------------------------------------------------------

std::string doc_emotions_json(const EmotionScores& scores) {
    JsonWriter w;
    w.begin_object();
    for (auto e : kEmotions) w.key(to_string(e)).fixed(scores[e], kScoreDecimals);
    w.end_object();
    return w.take();
}

std::string analyze_json(std::string_view text, const Lexicon& lexicon) {
    const auto scores = score_text(text, lexicon);
    JsonWriter w;
    w.begin_object();
    w.key("status").value("OK");
    w.key("language").value("english");
    w.key("docEmotions").raw(doc_emotions_json(scores));
    w.key("finalEmotion").value(to_string(final_emotion(scores)));
    w.end_object();
    return w.take();
}

HeadlessResult run_headless(const SessionConfig& config) {
    if (config.source != SourceKind::replay)
        throw ValidationError("headless mode requires the replay source");
    Session session("s1", config);
    HeadlessResult result;
    while (!session.done()) {
        session.tick();
        ++result.ticks;
    }
    result.lines = session.log().wire_lines();
    result.snapshot = session.snapshot();
    result.stats = session.stats();
    result.state = session.state();
    return result;
}

std::string to_jsonl(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

std::string summary_text(const SessionConfig& config, const SessionStats& stats,
                         const GraphSnapshot& snapshot) {
    std::ostringstream out;
    std::size_t live_leaves = 0;
    for (const auto& [id, node] : snapshot.nodes)
        if (node.kind == NodeKind::tweet) ++live_leaves;
    std::size_t ingested = stats.topics[0].ingested + stats.topics[1].ingested;
    std::size_t skipped = stats.unmatched + stats.topics[0].zero_score + stats.topics[1].zero_score +
                          stats.topics[0].duplicates + stats.topics[1].duplicates;

    out << "tweets read: " << stats.read << "\n";
    out << "ingested: " << ingested << "\n";
    out << "skipped: " << skipped << " (no topic " << stats.unmatched << ", zero score "
        << stats.topics[0].zero_score + stats.topics[1].zero_score << ", duplicate "
        << stats.topics[0].duplicates + stats.topics[1].duplicates << ")\n";
    for (auto topic : kTopics) {
        const auto& q = topic == TopicId::A ? config.topic_a : config.topic_b;
        const auto& tally = stats.topics[topic_index(topic)];
        out << "topic " << to_string(topic) << " \"" << q.phrase << "\": ingested " << tally.ingested;
        for (auto e : kEmotions) out << " " << to_string(e) << "=" << tally.by_emotion[index_of(e)];
        out << "\n";
    }
    out << "graph: " << snapshot.nodes.size() << " nodes (" << live_leaves << " live leaves), "
        << snapshot.edges.size() << " edges, last seq " << snapshot.last_seq << "\n";
    out << "layout steps: " << stats.layout_steps << "\n";
    return out.str();
}

}  // namespace plexus
