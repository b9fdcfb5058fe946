#include <doctest.h>

#include <cstdlib>
#include <set>

#include "../support/fixtures.hpp"
#include "plexus/errors.hpp"
#include "plexus/ingest.hpp"

using namespace plexus;

namespace {

TopicQuery query(TopicId id, std::string phrase) { return TopicQuery{id, std::move(phrase)}; }

Tweet tweet_with(std::string text) { return Tweet{"1", std::move(text), "2016-12-01T10:00:00Z", "u", "en", {}}; }

}  // namespace

TEST_CASE("build_query template") {
    CHECK(build_query(query(TopicId::A, "iPhone 7")) == R"("iPhone 7" lang:en -is:retweet)");
    auto q = query(TopicId::A, "a");
    q.exclude_retweets = false;
    CHECK(build_query(q) == R"("a" lang:en)");
    q.lang = "de";
    CHECK(build_query(q) == R"("a" lang:de)");
    CHECK(build_query(query(TopicId::B, "  padded ")) == R"("padded" lang:en -is:retweet)");
    CHECK_THROWS_AS(build_query(query(TopicId::A, "   ")), ValidationError);
    CHECK_THROWS_AS(build_query(query(TopicId::A, "")), ValidationError);
}

TEST_CASE("build_query is injective over distinct trimmed phrases") {
    const std::vector<std::string> phrases = {"a", "b", "a b", "ab", "A", "iPhone 7", "iPhone7", "x\"y", "é"};
    std::set<std::string> seen;
    for (const auto& p : phrases) seen.insert(build_query(query(TopicId::A, p)));
    CHECK(seen.size() == phrases.size());
}

TEST_CASE("topic pair validation") {
    CHECK_NOTHROW(validate_topic_pair(query(TopicId::A, "iPhone 7"), query(TopicId::B, "Galaxy S7")));
    CHECK_THROWS_AS(validate_topic_pair(query(TopicId::A, "x"), query(TopicId::B, "x")), ValidationError);
    CHECK_THROWS_AS(validate_topic_pair(query(TopicId::A, "Snow "), query(TopicId::B, " SNOW")),
                    ValidationError);
    CHECK_THROWS_AS(validate_topic_pair(query(TopicId::A, ""), query(TopicId::B, "x")), ValidationError);
}

TEST_CASE("parse_corpus_line") {
    const auto t = parse_corpus_line(
        R"({"id":"1","text":"I love snow","created_at":"2016-12-01T10:00:00Z","author":"u1","lang":"en"})");
    CHECK(t.id == "1");
    CHECK(t.text == "I love snow");
    CHECK(t.created_at == "2016-12-01T10:00:00Z");
    CHECK(t.author == "u1");
    CHECK(t.lang == "en");
    CHECK_FALSE(t.topic.has_value());

    try {
        parse_corpus_line("not json", 7);
        FAIL("expected a parse error");
    } catch (const CorpusParseError& e) {
        CHECK(e.line() == 7);
    }
    try {
        parse_corpus_line(R"({"id":"2","created_at":"2016-12-01T10:00:00Z","author":"u1","lang":"en"})", 3);
        FAIL("expected a schema error");
    } catch (const CorpusSchemaError& e) {
        CHECK(e.field() == "text");
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_corpus_line(R"({"id":"","text":"x","created_at":"2016-12-01T10:00:00Z","author":"u","lang":"en"})"),
                    CorpusSchemaError);
    CHECK_THROWS_AS(parse_corpus_line(R"({"id":"3","text":"x","created_at":"yesterday","author":"u","lang":"en"})"),
                    CorpusSchemaError);
    CHECK_THROWS_AS(parse_corpus_line("[1,2]"), CorpusParseError);
}

TEST_CASE("is_rfc3339") {
    CHECK(is_rfc3339("2016-12-01T10:00:00Z"));
    CHECK(is_rfc3339("2016-12-01T10:00:00.123Z"));
    CHECK(is_rfc3339("2016-12-01T10:00:00+05:30"));
    CHECK(is_rfc3339("2016-12-01t10:00:00z"));
    CHECK_FALSE(is_rfc3339("2016-12-01 10:00:00Z"));
    CHECK_FALSE(is_rfc3339("2016-13-01T10:00:00Z"));
    CHECK_FALSE(is_rfc3339("2016-12-01T10:00:00"));
    CHECK_FALSE(is_rfc3339(""));
}

TEST_CASE("match_topic examples") {
    const auto a = query(TopicId::A, "iPhone 7");
    const auto b = query(TopicId::B, "Samsung S7");
    auto m = match_topic(tweet_with("The iPhone 7 camera is great"), a, b);
    CHECK(m.a);
    CHECK_FALSE(m.b);
    m = match_topic(tweet_with("iphone 7 beats samsung s7"), a, b);
    CHECK(m.a);
    CHECK(m.b);
    CHECK(m.topics() == std::vector<TopicId>{TopicId::A, TopicId::B});
    CHECK(match_topic(tweet_with("hello world"), a, b).empty());
}

TEST_CASE("match_topic is symmetric under swapping the queries") {
    const std::vector<std::string> texts = {"iPhone 7 vs S7", "only s7 here", "IPHONE 7!!", "nothing", "S7 iphone 7"};
    const auto a = query(TopicId::A, "iPhone 7");
    const auto b = query(TopicId::B, "S7");
    auto a_as_b = a;
    a_as_b.topic = TopicId::B;
    auto b_as_a = b;
    b_as_a.topic = TopicId::A;
    for (const auto& text : texts) {
        const auto m = match_topic(tweet_with(text), a, b);
        const auto s = match_topic(tweet_with(text), b_as_a, a_as_b);
        CHECK(m.a == s.b);
        CHECK(m.b == s.a);
    }
}

TEST_CASE("replay source yields fixed batches then stays exhausted") {
    std::string corpus;
    for (int i = 0; i < 23; ++i)
        corpus += R"({"id":")" + std::to_string(i) +
                  R"(","text":"t","created_at":"2016-12-01T10:00:00Z","author":"u","lang":"en"})" "\n";
    corpus += "\n";
    ReplaySource src(corpus, 10);
    CHECK(src.size() == 23);
    CHECK(src.next_batch().tweets.size() == 10);
    CHECK(src.next_batch().tweets.size() == 10);
    auto last = src.next_batch();
    CHECK(last.tweets.size() == 3);
    CHECK(last.tweets.back().id == "22");
    auto end = src.next_batch();
    CHECK(end.tweets.empty());
    CHECK(end.exhausted);
    CHECK(src.next_batch().exhausted);
}

TEST_CASE("replay source is deterministic and reports bad lines at startup") {
    const auto path = std::string(PLEXUS_REPO_DATA) + "/corpus/iphone7-vs-s7.jsonl";
    auto one = ReplaySource::from_file(path);
    auto two = ReplaySource::from_file(path);
    CHECK(one->size() == 200);
    for (;;) {
        auto x = one->next_batch();
        auto y = two->next_batch();
        REQUIRE(x.tweets.size() == y.tweets.size());
        for (std::size_t i = 0; i < x.tweets.size(); ++i) {
            CHECK(x.tweets[i].id == y.tweets[i].id);
            CHECK(x.tweets[i].text == y.tweets[i].text);
        }
        if (x.exhausted) break;
    }
    try {
        ReplaySource bad(R"({"id":"1","text":"a","created_at":"2016-12-01T10:00:00Z","author":"u","lang":"en"})"
                         "\n{oops}\n");
        FAIL("expected a parse error");
    } catch (const CorpusParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(ReplaySource::from_file("/nonexistent.jsonl"), StartupError);
}

TEST_CASE("search request carries query, fields, cursor and bearer token") {
    Cursor c;
    c.next_token = "tok";
    c.since_id = "99";
    const auto req = build_search_request(query(TopicId::A, "iPhone 7"), Credentials{"secret"}, c);
    CHECK(req.url == kDefaultSearchUrl);
    auto param = [&](const std::string& k) -> std::string {
        for (const auto& [key, v] : req.params)
            if (key == k) return v;
        return "<absent>";
    };
    CHECK(param("query") == R"("iPhone 7" lang:en -is:retweet)");
    CHECK(param("next_token") == "tok");
    CHECK(param("since_id") == "99");
    CHECK(param("tweet.fields") == "created_at,author_id,lang");
    bool auth = false;
    for (const auto& [k, v] : req.headers) auth = auth || (k == "Authorization" && v == "Bearer secret");
    CHECK(auth);

    const auto fresh = build_search_request(query(TopicId::A, "x"), Credentials{"s"}, Cursor{});
    for (const auto& [k, v] : fresh.params) {
        CHECK(k != "next_token");
        CHECK(k != "since_id");
    }
}

TEST_CASE("canned search responses") {
    const auto q = query(TopicId::B, "iPhone 7");
    const auto ok = parse_search_response(fixture::http_response("search_200.json"), q, Cursor{});
    REQUIRE(ok.tweets.size() == 2);
    CHECK(ok.tweets[0].id == "1200000000000000002");
    CHECK(ok.tweets[0].author == "9001");
    CHECK(ok.tweets[1].text == "not sure about the iPhone 7 yet");
    for (const auto& t : ok.tweets) CHECK(t.topic == TopicId::B);
    CHECK(ok.next.next_token == "b26v89c19zqg8o3fo7gesq314yb9l2l4ptqy");
    CHECK(ok.next.newest_id == "1200000000000000002");
    CHECK_FALSE(ok.next.since_id.has_value());

    // Last page: the cursor switches to since_id = newest id seen overall.
    const auto last = parse_search_response(fixture::http_response("search_200_last_page.json"), q, ok.next);
    CHECK(last.tweets.size() == 1);
    CHECK_FALSE(last.next.next_token.has_value());
    CHECK(last.next.since_id == "1200000000000000002");

    const auto empty = parse_search_response(fixture::http_response("search_200_empty.json"), q, last.next);
    CHECK(empty.tweets.empty());
    CHECK(empty.next.since_id == "1200000000000000002");

    CHECK_THROWS_AS(parse_search_response(fixture::http_response("search_401.json"), q, Cursor{}), AuthError);
    try {
        parse_search_response(fixture::http_response("search_429.json"), q, Cursor{});
        FAIL("expected rate limiting");
    } catch (const RateLimitedError& e) {
        CHECK(e.retry_after() == std::chrono::seconds(60));
    }
    CHECK_THROWS_AS(parse_search_response(fixture::http_response("search_malformed.json"), q, Cursor{}),
                    ProtocolError);
    HttpResponse teapot{418, {}, "{}"};
    CHECK_THROWS_AS(parse_search_response(teapot, q, Cursor{}), ProtocolError);
    HttpResponse missing_field{200, {}, R"({"data":[{"id":"1","text":"x"}]})"};
    CHECK_THROWS_AS(parse_search_response(missing_field, q, Cursor{}), ProtocolError);
}

TEST_CASE("fetch_live_batch sends the request through the transport") {
    std::vector<HttpRequest> seen;
    HttpTransport transport = [&](const HttpRequest& r) {
        seen.push_back(r);
        return fixture::http_response("search_200.json");
    };
    const auto batch = fetch_live_batch(query(TopicId::A, "iPhone 7"), Credentials{"t"}, Cursor{}, transport);
    CHECK(batch.tweets.size() == 2);
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].url == kDefaultSearchUrl);
}

TEST_CASE("live source paces polls and surfaces rate limits") {
    using namespace std::chrono;
    steady_clock::time_point now{};
    std::vector<std::string> script = {"search_200.json", "search_200_last_page.json", "search_429.json",
                                       "search_200_empty.json"};
    std::size_t calls = 0;
    HttpTransport transport = [&](const HttpRequest&) { return fixture::http_response(script.at(calls++)); };
    LiveSource src(query(TopicId::A, "iPhone 7"), Credentials{"t"}, transport, seconds(10), [&] { return now; });

    auto b = src.next_batch();
    CHECK(b.tweets.size() == 2);
    CHECK_FALSE(b.exhausted);
    // A pending next_token allows an immediate follow-up poll.
    b = src.next_batch();
    CHECK(b.tweets.size() == 1);
    CHECK(calls == 2);
    // Otherwise the source waits out the poll interval.
    b = src.next_batch();
    CHECK(b.tweets.empty());
    CHECK(calls == 2);
    now += seconds(10);
    b = src.next_batch();
    CHECK(calls == 3);
    REQUIRE(b.retry_after.has_value());
    CHECK(*b.retry_after == seconds(60));
    now += seconds(59);
    CHECK(src.next_batch().tweets.empty());
    CHECK(calls == 3);
    now += seconds(1);
    b = src.next_batch();
    CHECK(calls == 4);
    CHECK_FALSE(b.exhausted);
}

TEST_CASE("live source propagates auth failures") {
    HttpTransport transport = [](const HttpRequest&) { return fixture::http_response("search_401.json"); };
    LiveSource src(query(TopicId::A, "x"), Credentials{"t"}, transport);
    CHECK_THROWS_AS(src.next_batch(), AuthError);
}

TEST_CASE("credentials come from the environment") {
    ::unsetenv(kBearerTokenEnv);
    CHECK_THROWS_AS(Credentials::from_env(), AuthConfigError);
    ::setenv(kBearerTokenEnv, "", 1);
    CHECK_THROWS_AS(Credentials::from_env(), AuthConfigError);
    ::setenv(kBearerTokenEnv, "abc", 1);
    CHECK(Credentials::from_env().bearer_token == "abc");
    ::unsetenv(kBearerTokenEnv);
}
