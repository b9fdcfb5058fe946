#include "plexus/ingest.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plexus/emotion.hpp"
#include "plexus/errors.hpp"

namespace plexus {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

bool digits(std::string_view s, std::size_t pos, std::size_t n) {
    if (pos + n > s.size()) return false;
    for (std::size_t i = pos; i < pos + n; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

int number_at(std::string_view s, std::size_t pos, std::size_t n) {
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

// Decimal snowflake ids compare by length, then lexicographically.
bool id_less(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::string required_string(const json& obj, const char* field, std::size_t line_no) {
    auto it = obj.find(field);
    if (it == obj.end()) throw CorpusSchemaError(line_no, field, "is missing");
    if (!it->is_string()) throw CorpusSchemaError(line_no, field, "must be a string");
    auto value = it->get<std::string>();
    if (value.empty()) throw CorpusSchemaError(line_no, field, "is empty");
    return value;
}

}  // namespace

std::string_view to_string(TopicId t) noexcept { return t == TopicId::A ? "A" : "B"; }

std::optional<TopicId> parse_topic(std::string_view s) noexcept {
    if (s == "A") return TopicId::A;
    if (s == "B") return TopicId::B;
    return std::nullopt;
}

void TopicQuery::validate() const {
    if (trim(phrase).empty())
        throw ValidationError("topic " + std::string(to_string(topic)) + ": phrase is empty");
    if (trim(lang).empty())
        throw ValidationError("topic " + std::string(to_string(topic)) + ": language is empty");
}

void validate_topic_pair(const TopicQuery& a, const TopicQuery& b) {
    a.validate();
    b.validate();
    if (a.topic == b.topic) throw ValidationError("both queries carry the same topic id");
    if (fold_case(trim(a.phrase)) == fold_case(trim(b.phrase)))
        throw ValidationError("topics must differ");
}

std::string build_query(const TopicQuery& q) {
    q.validate();
    std::string query = "\"" + std::string(trim(q.phrase)) + "\" lang:" + std::string(trim(q.lang));
    if (q.exclude_retweets) query += " -is:retweet";
    return query;
}

bool is_rfc3339(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
    if (!digits(s, 0, 4) || s.size() < 20 || s[4] != '-' || !digits(s, 5, 2) || s[7] != '-' ||
        !digits(s, 8, 2) || (s[10] != 'T' && s[10] != 't') || !digits(s, 11, 2) || s[13] != ':' ||
        !digits(s, 14, 2) || s[16] != ':' || !digits(s, 17, 2))
        return false;
    const int month = number_at(s, 5, 2), day = number_at(s, 8, 2);
    const int hour = number_at(s, 11, 2), minute = number_at(s, 14, 2), second = number_at(s, 17, 2);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        return false;
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        const auto start = ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) return false;
    }
    if (pos == s.size()) return false;
    if (s[pos] == 'Z' || s[pos] == 'z') return pos + 1 == s.size();
    if (s[pos] != '+' && s[pos] != '-') return false;
    return pos + 6 == s.size() && digits(s, pos + 1, 2) && s[pos + 3] == ':' &&
           digits(s, pos + 4, 2) && number_at(s, pos + 1, 2) <= 23 && number_at(s, pos + 4, 2) <= 59;
}

Tweet parse_corpus_line(std::string_view line, std::size_t line_no) {
    json record;
    try {
        record = json::parse(line);
    } catch (const json::parse_error& e) {
        throw CorpusParseError(line_no, e.what());
    }
    if (!record.is_object()) throw CorpusParseError(line_no, "record is not an object");

    Tweet tweet;
    tweet.id = required_string(record, "id", line_no);
    tweet.text = required_string(record, "text", line_no);
    tweet.created_at = required_string(record, "created_at", line_no);
    if (!is_rfc3339(tweet.created_at))
        throw CorpusSchemaError(line_no, "created_at", "is not an RFC 3339 timestamp");
    tweet.author = required_string(record, "author", line_no);
    tweet.lang = required_string(record, "lang", line_no);
    return tweet;
}

std::vector<TopicId> TopicMatch::topics() const {
    std::vector<TopicId> out;
    if (a) out.push_back(TopicId::A);
    if (b) out.push_back(TopicId::B);
    return out;
}

TopicMatch match_topic(const Tweet& tweet, const TopicQuery& a, const TopicQuery& b) {
    const auto text = fold_case(tweet.text);
    auto occurs = [&](const TopicQuery& q) {
        return text.find(fold_case(trim(q.phrase))) != std::string::npos;
    };
    return TopicMatch{occurs(a), occurs(b)};
}

// ---- ReplaySource ----------------------------------------------------------

ReplaySource::ReplaySource(std::string_view corpus, std::size_t batch_size)
    : batch_size_(batch_size == 0 ? 1 : batch_size) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < corpus.size()) {
        auto end = corpus.find('\n', start);
        if (end == std::string_view::npos) end = corpus.size();
        const auto line = corpus.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (trim(line).empty()) continue;
        tweets_.push_back(parse_corpus_line(line, line_no));
    }
}

std::unique_ptr<ReplaySource> ReplaySource::from_file(const std::filesystem::path& path,
                                                      std::size_t batch_size) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StartupError(path.string(), "cannot read corpus");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::make_unique<ReplaySource>(buffer.str(), batch_size);
}

Batch ReplaySource::next_batch() {
    Batch batch;
    const auto end = std::min(tweets_.size(), position_ + batch_size_);
    batch.tweets.assign(tweets_.begin() + static_cast<std::ptrdiff_t>(position_),
                        tweets_.begin() + static_cast<std::ptrdiff_t>(end));
    position_ = end;
    batch.exhausted = batch.tweets.empty();
    return batch;
}

// ---- live client -------------------------------------------------------------

Credentials Credentials::from_env() {
    const char* token = std::getenv(kBearerTokenEnv);
    if (token == nullptr || *token == '\0')
        throw AuthConfigError(std::string("live source requires ") + kBearerTokenEnv);
    return Credentials{token};
}

HttpRequest build_search_request(const TopicQuery& q, const Credentials& credentials,
                                 const Cursor& cursor, std::string_view url) {
    HttpRequest request;
    request.url = std::string(url);
    request.params = {{"query", build_query(q)},
                      {"tweet.fields", "created_at,author_id,lang"},
                      {"max_results", "100"}};
    if (cursor.next_token) request.params.emplace_back("next_token", *cursor.next_token);
    if (cursor.since_id) request.params.emplace_back("since_id", *cursor.since_id);
    request.headers = {{"Authorization", "Bearer " + credentials.bearer_token}};
    return request;
}

LiveBatch parse_search_response(const HttpResponse& response, const TopicQuery& q,
                                const Cursor& cursor) {
    if (response.status == 401) throw AuthError("search endpoint rejected the bearer token (401)");
    if (response.status == 429) {
        long seconds = 60;
        if (auto it = response.headers.find("retry-after"); it != response.headers.end()) {
            char* end = nullptr;
            const long parsed = std::strtol(it->second.c_str(), &end, 10);
            if (end != it->second.c_str() && parsed >= 0) seconds = parsed;
        }
        throw RateLimitedError(std::chrono::seconds(seconds));
    }
    if (response.status != 200)
        throw ProtocolError("unexpected HTTP status " + std::to_string(response.status));

    json body;
    try {
        body = json::parse(response.body);
    } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("malformed response body: ") + e.what());
    }
    if (!body.is_object()) throw ProtocolError("response body is not an object");

    LiveBatch batch;
    std::optional<std::string> newest = cursor.newest_id;
    if (auto data = body.find("data"); data != body.end()) {
        if (!data->is_array()) throw ProtocolError("\"data\" is not an array");
        for (const auto& item : *data) {
            auto field = [&](const char* name) {
                auto it = item.find(name);
                if (it == item.end() || !it->is_string() || it->get<std::string>().empty())
                    throw ProtocolError(std::string("result object lacks \"") + name + "\"");
                return it->get<std::string>();
            };
            if (!item.is_object()) throw ProtocolError("result is not an object");
            Tweet tweet{field("id"), field("text"), field("created_at"), field("author_id"),
                        field("lang"), q.topic};
            if (!is_rfc3339(tweet.created_at)) throw ProtocolError("bad created_at in result");
            if (!newest || id_less(*newest, tweet.id)) newest = tweet.id;
            batch.tweets.push_back(std::move(tweet));
        }
    }

    std::optional<std::string> next_token;
    if (auto meta = body.find("meta"); meta != body.end()) {
        if (!meta->is_object()) throw ProtocolError("\"meta\" is not an object");
        if (auto t = meta->find("next_token"); t != meta->end()) {
            if (!t->is_string()) throw ProtocolError("\"next_token\" is not a string");
            next_token = t->get<std::string>();
        }
    }

    batch.next.newest_id = newest;
    if (next_token) {
        batch.next.next_token = next_token;
        batch.next.since_id = cursor.since_id;
    } else {
        batch.next.since_id = newest ? newest : cursor.since_id;
    }
    return batch;
}

LiveBatch fetch_live_batch(const TopicQuery& q, const Credentials& credentials,
                           const Cursor& cursor, const HttpTransport& transport,
                           std::string_view url) {
    return parse_search_response(transport(build_search_request(q, credentials, cursor, url)), q,
                                 cursor);
}

LiveSource::LiveSource(TopicQuery query, Credentials credentials, HttpTransport transport,
                       std::chrono::milliseconds poll_interval, Clock clock)
    : query_(std::move(query)),
      credentials_(std::move(credentials)),
      transport_(std::move(transport)),
      poll_interval_(poll_interval),
      clock_(std::move(clock)) {
    query_.validate();
}

Batch LiveSource::next_batch() {
    const auto now = clock_();
    Batch batch;
    if (next_poll_ && now < *next_poll_) return batch;
    try {
        auto live = fetch_live_batch(query_, credentials_, cursor_, transport_);
        batch.tweets = std::move(live.tweets);
        // More pages of the same result set are fetched without waiting.
        next_poll_ = live.next.next_token ? now : now + poll_interval_;
        cursor_ = std::move(live.next);
    } catch (const RateLimitedError& e) {
        batch.retry_after = e.retry_after();
        next_poll_ = now + e.retry_after();
    }
    return batch;
}

}  // namespace plexus
