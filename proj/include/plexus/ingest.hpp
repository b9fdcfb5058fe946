#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plexus {

enum class TopicId : std::uint8_t { A, B };

inline constexpr std::array<TopicId, 2> kTopics = {TopicId::A, TopicId::B};

std::string_view to_string(TopicId t) noexcept;
std::optional<TopicId> parse_topic(std::string_view s) noexcept;

struct Tweet {
    std::string id;
    std::string text;
    std::string created_at;  // RFC 3339, validated on parse
    std::string author;
    std::string lang;
    std::optional<TopicId> topic;

    friend bool operator==(const Tweet&, const Tweet&) = default;
};

struct TopicQuery {
    TopicId topic = TopicId::A;
    std::string phrase;
    std::string lang = "en";
    bool exclude_retweets = true;

    // Throws ValidationError on an empty (after trim) phrase or language.
    void validate() const;
};

// Both queries valid and their trimmed phrases differ case-insensitively.
void validate_topic_pair(const TopicQuery& a, const TopicQuery& b);

// `"<phrase>" lang:<code> -is:retweet`; the phrase is trimmed and quoted.
std::string build_query(const TopicQuery& q);

bool is_rfc3339(std::string_view s);

// One corpus JSONL record -> Tweet (topic unset). `line_no` is 1-based and
// only used for error reporting.
Tweet parse_corpus_line(std::string_view line, std::size_t line_no = 1);

struct TopicMatch {
    bool a = false;
    bool b = false;

    bool empty() const noexcept { return !a && !b; }
    bool contains(TopicId t) const noexcept { return t == TopicId::A ? a : b; }
    std::vector<TopicId> topics() const;

    friend bool operator==(const TopicMatch&, const TopicMatch&) = default;
};

// Case-insensitive substring test of each query phrase against the text.
TopicMatch match_topic(const Tweet& tweet, const TopicQuery& a, const TopicQuery& b);

// ---- sources --------------------------------------------------------------

struct Batch {
    std::vector<Tweet> tweets;
    bool exhausted = false;                             // no more data will ever arrive
    std::optional<std::chrono::seconds> retry_after;    // set when rate limited
};

// Pull-based producer. One consumer per instance.
class TweetSource {
public:
    virtual ~TweetSource() = default;
    virtual Batch next_batch() = 0;
};

// File-backed deterministic source: yields the corpus in fixed-size batches,
// then an empty exhausted batch forever.
class ReplaySource final : public TweetSource {
public:
    static constexpr std::size_t kDefaultBatchSize = 10;

    // Parses the whole corpus eagerly so malformed files fail at startup.
    ReplaySource(std::string_view corpus, std::size_t batch_size = kDefaultBatchSize);
    static std::unique_ptr<ReplaySource> from_file(const std::filesystem::path& path,
                                                   std::size_t batch_size = kDefaultBatchSize);

    Batch next_batch() override;

    std::size_t size() const noexcept { return tweets_.size(); }
    std::size_t remaining() const noexcept { return tweets_.size() - position_; }

private:
    std::vector<Tweet> tweets_;
    std::size_t batch_size_;
    std::size_t position_ = 0;
};

// ---- live search client ---------------------------------------------------

inline constexpr const char* kBearerTokenEnv = "PLEXUS_BEARER_TOKEN";
inline constexpr const char* kDefaultSearchUrl = "https://api.twitter.com/2/tweets/search/recent";

struct Credentials {
    std::string bearer_token;

    // Throws AuthConfigError when the variable is unset or empty.
    static Credentials from_env();
};

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;  // lower-cased names
    std::string body;
};

struct HttpRequest {
    std::string url;  // scheme://host[:port]/path
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> headers;
};

// Injected so the client can be exercised against canned fixtures.
using HttpTransport = std::function<HttpResponse(const HttpRequest&)>;

// Real HTTPS transport.
HttpTransport make_http_transport();

// Pagination state. `next_token` walks the current result set; once it is
// exhausted the cursor remembers the newest id seen so later polls only
// fetch newer posts.
struct Cursor {
    std::optional<std::string> next_token;
    std::optional<std::string> since_id;
    std::optional<std::string> newest_id;  // highest id seen so far

    friend bool operator==(const Cursor&, const Cursor&) = default;
};

struct LiveBatch {
    std::vector<Tweet> tweets;
    Cursor next;
};

HttpRequest build_search_request(const TopicQuery& q, const Credentials& credentials,
                                 const Cursor& cursor,
                                 std::string_view url = kDefaultSearchUrl);

// Interprets one search response. Throws AuthError (401), RateLimitedError
// (429) or ProtocolError (any other failure or a malformed body).
LiveBatch parse_search_response(const HttpResponse& response, const TopicQuery& q,
                                const Cursor& cursor);

LiveBatch fetch_live_batch(const TopicQuery& q, const Credentials& credentials,
                           const Cursor& cursor, const HttpTransport& transport,
                           std::string_view url = kDefaultSearchUrl);

// Polls the search endpoint for one topic, no more often than the poll
// interval. Rate limiting surfaces as Batch::retry_after; auth failures
// propagate as AuthError.
class LiveSource final : public TweetSource {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;
    static constexpr std::chrono::seconds kDefaultPollInterval{10};

    LiveSource(TopicQuery query, Credentials credentials, HttpTransport transport,
               std::chrono::milliseconds poll_interval = kDefaultPollInterval,
               Clock clock = std::chrono::steady_clock::now);

    Batch next_batch() override;

    const Cursor& cursor() const noexcept { return cursor_; }

private:
    TopicQuery query_;
    Credentials credentials_;
    HttpTransport transport_;
    std::chrono::milliseconds poll_interval_;
    Clock clock_;
    Cursor cursor_;
    std::optional<std::chrono::steady_clock::time_point> next_poll_;
};

}  // namespace plexus
