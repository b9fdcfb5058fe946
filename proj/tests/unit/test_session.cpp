#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <json.hpp>

#include "../support/fixtures.hpp"
#include "plexus/errors.hpp"
#include "plexus/event_codec.hpp"
#include "plexus/session.hpp"

using namespace plexus;
namespace fs = std::filesystem;

namespace {

std::string post(const std::string& id, const std::string& text) {
    nlohmann::json j{{"id", id},
                     {"text", text},
                     {"created_at", "2016-12-01T10:00:00Z"},
                     {"author", "u" + id},
                     {"lang", "en"}};
    return j.dump();
}

fs::path write_corpus(const std::string& name, const std::vector<std::string>& lines) {
    const auto dir = fs::temp_directory_path() / "plexus-session-tests";
    fs::create_directories(dir);
    const auto path = dir / (name + ".jsonl");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (const auto& l : lines) out << l << '\n';
    return path;
}

SessionConfig toy_config(const fs::path& corpus) {
    SessionConfig c;
    c.topic_a = {TopicId::A, "snow"};
    c.topic_b = {TopicId::B, "rain"};
    c.corpus = corpus;
    c.lexicon = fixture::data("toy.lex");
    c.seed = 42;
    return c;
}

SessionConfig bundled_config(std::uint64_t seed = 42) {
    SessionConfig c;
    c.topic_a = {TopicId::A, "iPhone 7"};
    c.topic_b = {TopicId::B, "Galaxy S7"};
    c.corpus = std::string(PLEXUS_REPO_DATA) + "/corpus/iphone7-vs-s7.jsonl";
    c.lexicon = std::string(PLEXUS_REPO_DATA) + "/lexicon/emotions.lex";
    c.seed = seed;
    return c;
}

template <class T>
std::size_t count_of(const std::vector<GraphEvent>& events) {
    std::size_t n = 0;
    for (const auto& e : events) n += std::holds_alternative<T>(e.payload);
    return n;
}

}  // namespace

TEST_CASE("session start emits the initial topology") {
    Session s("s1", toy_config(write_corpus("init", {post("1", "I love snow")})));
    CHECK(s.log().size() == 22);
    const auto snap = s.snapshot();
    CHECK(snap.nodes.size() == 12);
    CHECK(snap.edges.size() == 10);
    CHECK(snap.last_seq == 21);
    CHECK(s.state() == SessionState::running);
}

TEST_CASE("session startup errors") {
    const auto corpus = write_corpus("errors", {post("1", "I love snow")});
    auto c = toy_config(corpus);
    c.topic_b.phrase = " SNOW";
    CHECK_THROWS_AS(Session("s", c), ValidationError);

    c = toy_config(corpus);
    c.corpus = "/nonexistent/corpus.jsonl";
    try {
        Session s("s", c);
        FAIL("expected a startup error");
    } catch (const StartupError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/corpus.jsonl") != std::string::npos);
    }

    c = toy_config(corpus);
    c.lexicon = "/nonexistent/x.lex";
    CHECK_THROWS_AS(Session("s", c), StartupError);

    c = toy_config(corpus);
    c.stylesheet = "/nonexistent/theme.css";
    CHECK_THROWS_AS(Session("s", c), StartupError);

    c = toy_config(corpus);
    c.source = SourceKind::live;
    const char* saved = std::getenv(kBearerTokenEnv);
    const std::string saved_value = saved ? saved : "";
    unsetenv(kBearerTokenEnv);
    CHECK_THROWS_AS(Session("s", c), AuthConfigError);
    if (saved) setenv(kBearerTokenEnv, saved_value.c_str(), 1);
}

TEST_CASE("a malformed stylesheet fails startup with its position") {
    const auto dir = fs::temp_directory_path() / "plexus-session-tests";
    fs::create_directories(dir);
    const auto css = dir / "bad.css";
    std::ofstream(css) << "node { colour: #FFFFFF; }\n";
    auto c = toy_config(write_corpus("badcss", {post("1", "I love snow")}));
    c.stylesheet = css;
    CHECK_THROWS_AS(Session("s", c), UnknownPropertyError);
}

TEST_CASE("three scored posts in one tick give nine graph events and one positions event") {
    Session s("s1", toy_config(write_corpus("three", {post("1", "I love snow"), post("2", "I hate rain"),
                                                       post("3", "snow love love")})));
    const auto events = s.tick();
    REQUIRE(events.size() == 10);
    CHECK(count_of<NodeAdded>(events) == 3);
    CHECK(count_of<EdgeAdded>(events) == 3);
    CHECK(count_of<AttrChanged>(events) == 3);
    CHECK(std::holds_alternative<PositionsUpdate>(events.back().payload));
    for (std::size_t i = 0; i < events.size(); ++i) CHECK(events[i].seq == 22 + i);
    const auto& pos = std::get<PositionsUpdate>(events.back().payload).positions;
    CHECK(pos.size() == 15);
    // Replay learns it is exhausted from the next, empty pull.
    CHECK(s.state() == SessionState::running);
    CHECK(s.tick().size() == 1);
    CHECK(s.state() == SessionState::drained);
}

TEST_CASE("a tick with only zero-score or unmatched posts adds only positions") {
    Session s("s1", toy_config(write_corpus("zero", {post("1", "snow again"), post("2", "nothing here"),
                                                      post("3", "I do not love rain")})));
    const auto events = s.tick();
    REQUIRE(events.size() == 1);
    CHECK(std::holds_alternative<PositionsUpdate>(events[0].payload));
    const auto stats = s.stats();
    CHECK(stats.read == 3);
    CHECK(stats.unmatched == 1);
    CHECK(stats.topics[0].zero_score == 1);
    CHECK(stats.topics[1].zero_score == 1);
    CHECK(s.snapshot().nodes.size() == 12);
}

TEST_CASE("a finished session emits nothing further") {
    Session s("s1", toy_config(write_corpus("finish", {post("1", "I love snow")})));
    std::size_t ticks = 0;
    while (!s.done() && ticks < 5000) {
        s.tick();
        ++ticks;
    }
    REQUIRE(s.state() == SessionState::finished);
    CHECK(s.log().closed());
    const auto size = s.log().size();
    CHECK(s.tick().empty());
    CHECK(s.log().size() == size);
}

TEST_CASE("duplicate post ids are ingested once per topic") {
    Session s("s1", toy_config(write_corpus("dup", {post("1", "I love snow"), post("1", "I love snow")})));
    s.tick();
    const auto stats = s.stats();
    CHECK(stats.topics[0].ingested == 1);
    CHECK(stats.topics[0].duplicates == 1);
}

TEST_CASE("a post naming both topics lands under each") {
    Session s("s1", toy_config(write_corpus("both", {post("1", "love snow and rain")})));
    s.tick();
    const auto snap = s.snapshot();
    CHECK(snap.node("t:A:1") != nullptr);
    CHECK(snap.node("t:B:1") != nullptr);
}

TEST_CASE("node detail records") {
    Session s("s1", toy_config(write_corpus("detail", {post("7", "I love snow"), post("8", "snow")})));
    s.tick();

    const auto tweet = nlohmann::json::parse(s.node_detail("t:A:7"));
    CHECK(tweet.at("id") == "t:A:7");
    CHECK(tweet.at("kind") == "tweet");
    CHECK(tweet.at("topic") == "A");
    CHECK(tweet.at("tweet_id") == "7");
    CHECK(tweet.at("text") == "I love snow");
    CHECK(tweet.at("author") == "u7");
    CHECK(tweet.at("finalEmotion") == "joy");
    CHECK(tweet.at("docEmotions").at("joy").get<double>() == doctest::Approx(0.8));
    CHECK(s.node_detail("t:A:7").find("\"joy\":0.800000") != std::string::npos);

    const auto hub = nlohmann::json::parse(s.node_detail("A:joy"));
    CHECK(hub.at("kind") == "emotion");
    CHECK(hub.at("topic") == "A");
    CHECK(hub.at("emotion") == "joy");
    CHECK(hub.at("total_count") == 1);
    CHECK(hub.at("live_count") == 1);

    const auto topic = nlohmann::json::parse(s.node_detail("topic:A"));
    CHECK(topic.at("kind") == "topic");
    CHECK(topic.at("phrase") == "snow");
    CHECK(topic.at("query") == "\"snow\" lang:en -is:retweet");
    CHECK(topic.at("skipped") == 1);

    CHECK_THROWS_AS(s.node_detail("t:A:8"), NotFoundError);
    CHECK_THROWS_AS(s.node_detail("nope"), NotFoundError);
}

TEST_CASE("a reader joining late catches up from seq 0") {
    Session s("s1", toy_config(write_corpus("catchup", {post("1", "I love snow"), post("2", "I hate rain")})));
    s.tick();
    s.tick();
    const auto lines = s.log().wait_from(0, std::chrono::milliseconds(0));
    REQUIRE(lines.size() == s.log().size());
    for (std::size_t i = 0; i < lines.size(); ++i) CHECK(event_from_json(lines[i]).seq == i);
    CHECK(s.log().wait_from(lines.size(), std::chrono::milliseconds(10)).empty());
}

TEST_CASE("wait_from wakes on append") {
    Session s("s1", toy_config(write_corpus("wake", {post("1", "I love snow")})));
    const auto from = s.log().size();
    std::vector<std::string> got;
    std::thread reader([&] { got = s.log().wait_from(from, std::chrono::seconds(10)); });
    s.tick();
    reader.join();
    CHECK_FALSE(got.empty());
}

TEST_CASE("the worker thread drives a session to completion") {
    auto c = toy_config(write_corpus("worker", {post("1", "I love snow")}));
    c.tick_interval = std::chrono::milliseconds(0);
    Session s("s1", c);
    s.start_worker();
    for (int i = 0; i < 500 && !s.done(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    s.stop_worker();
    CHECK(s.state() == SessionState::finished);
}

TEST_CASE("live session with a canned transport") {
    const auto page = fixture::http_response("search_200.json");
    const auto last = fixture::http_response("search_200_last_page.json");
    const auto empty = fixture::http_response("search_200_empty.json");
    int calls_a = 0;
    LiveDeps deps;
    deps.credentials = Credentials{"token"};
    deps.poll_interval = std::chrono::milliseconds(0);
    deps.transport = [&](const HttpRequest& r) {
        for (const auto& [k, v] : r.params)
            if (k == "query" && v.find("iPhone 7") != std::string::npos) return ++calls_a == 1 ? page : last;
        return empty;
    };
    SessionConfig c = bundled_config();
    c.source = SourceKind::live;
    Session s("s1", c, deps);
    s.tick();
    s.tick();
    const auto snap = s.snapshot();
    std::size_t leaves = 0;
    for (const auto& [id, n] : snap.nodes) leaves += n.kind == NodeKind::tweet;
    CHECK(s.state() == SessionState::running);
    CHECK(s.stats().read == 3);
    CHECK(leaves + s.stats().topics[0].zero_score == 3);
    for (const auto& [id, n] : snap.nodes)
        if (n.kind == NodeKind::tweet) CHECK(id.rfind("t:A:", 0) == 0);
}

TEST_CASE("live auth failure fails the session and closes the log") {
    const auto unauthorized = fixture::http_response("search_401.json");
    LiveDeps deps;
    deps.credentials = Credentials{"bad"};
    deps.poll_interval = std::chrono::milliseconds(0);
    deps.transport = [&](const HttpRequest&) { return unauthorized; };
    SessionConfig c = bundled_config();
    c.source = SourceKind::live;
    Session s("s1", c, deps);
    CHECK(s.tick().empty());
    CHECK(s.state() == SessionState::failed);
    CHECK_FALSE(s.failure().empty());
    CHECK(s.log().closed());
}

TEST_CASE("live rate limiting and malformed pages are counted, not fatal") {
    const auto limited = fixture::http_response("search_429.json");
    const auto malformed = fixture::http_response("search_malformed.json");
    LiveDeps deps;
    deps.credentials = Credentials{"token"};
    deps.poll_interval = std::chrono::milliseconds(0);
    deps.transport = [&](const HttpRequest& r) {
        for (const auto& [k, v] : r.params)
            if (k == "query" && v.find("iPhone 7") != std::string::npos) return limited;
        return malformed;
    };
    SessionConfig c = bundled_config();
    c.source = SourceKind::live;
    Session s("s1", c, deps);
    const auto events = s.tick();
    CHECK(events.size() == 1);
    CHECK(s.state() == SessionState::running);
    CHECK(s.stats().rate_limited == 1);
    CHECK(s.stats().source_errors == 1);
}

TEST_CASE("headless runs are deterministic and the log folds to the snapshot") {
    const auto a = run_headless(bundled_config(42));
    const auto b = run_headless(bundled_config(42));
    CHECK(a.state == SessionState::finished);
    CHECK(to_jsonl(a.lines) == to_jsonl(b.lines));
    std::vector<GraphEvent> events;
    for (const auto& l : a.lines) events.push_back(event_from_json(l));
    CHECK(fold_events(events) == a.snapshot);
    CHECK(a.stats.read == 200);

    const auto c = run_headless(bundled_config(7));
    CHECK_FALSE(to_jsonl(a.lines) == to_jsonl(c.lines));

    auto live = bundled_config();
    live.source = SourceKind::live;
    CHECK_THROWS_AS(run_headless(live), ValidationError);
}

TEST_CASE("session manager") {
    SessionManager m;
    const auto corpus = write_corpus("manager", {post("1", "I love snow")});
    CHECK(m.create(toy_config(corpus))->id() == "s1");
    CHECK(m.create(toy_config(corpus))->id() == "s2");
    CHECK(m.ids() == std::vector<std::string>{"s1", "s2"});
    CHECK(m.get("s2")->id() == "s2");
    CHECK_THROWS_AS(m.get("s3"), NotFoundError);
    auto bad = toy_config(corpus);
    bad.topic_b.phrase = "snow";
    CHECK_THROWS_AS(m.create(bad), ValidationError);
    CHECK(m.create(toy_config(corpus))->id() == "s3");
    m.stop_all();
}

TEST_CASE("analyze and JSONL helpers") {
    const auto lex = load_lexicon_file(fixture::data("toy.lex"));
    CHECK(analyze_json("I love it", lex) ==
          R"({"status":"OK","language":"english","docEmotions":{"anger":0.000000,"disgust":0.000000,"fear":0.000000,"joy":0.800000,"sadness":0.000000},"finalEmotion":"joy"})");
    CHECK(to_jsonl({}) == "");
    CHECK(to_jsonl({"a", "b"}) == "a\nb");
}
