#include "plexus/emotion.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "plexus/errors.hpp"

namespace plexus {

namespace {

constexpr std::array<std::string_view, kEmotionCount> kNames = {"anger", "disgust", "fear",
                                                                 "joy", "sadness"};

// Decodes the code point at `pos` and advances it. Ill-formed sequences
// yield U+FFFD so tokenization stays total.
UChar32 next_code_point(std::string_view text, std::size_t& pos) {
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    auto i = static_cast<int32_t>(pos);
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    pos = static_cast<std::size_t>(i);
    return c < 0 ? 0xFFFD : c;
}

void append_utf8(std::string& out, UChar32 c) {
    char buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(buf, static_cast<std::size_t>(n));
}

bool starts_run(UChar32 c) { return u_isalnum(c) != 0; }

// Combining marks extend a run but never start one ("cafe" + U+0301).
bool continues_run(UChar32 c) {
    if (u_isalnum(c)) return true;
    const auto mask = U_GET_GC_MASK(c);
    return (mask & (U_GC_MN_MASK | U_GC_MC_MASK)) != 0;
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\f\v";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::string single_token(std::string_view raw, std::size_t line) {
    auto tokens = tokenize(raw);
    if (tokens.size() != 1 || tokens.front() != fold_case(trim(raw)))
        throw LexiconError(line, "'" + std::string(raw) + "' is not a single token");
    return std::move(tokens.front());
}

}  // namespace

std::string_view to_string(Emotion e) noexcept { return kNames[index_of(e)]; }

std::optional<Emotion> parse_emotion(std::string_view name) noexcept {
    for (auto e : kEmotions)
        if (kNames[index_of(e)] == name) return e;
    return std::nullopt;
}

bool EmotionScores::all_zero() const noexcept {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

const EmotionWeights* Lexicon::find(std::string_view token) const {
    // Heterogeneous lookup on unordered_map needs C++20 library support that
    // libstdc++ 11 lacks.
    auto it = entries_.find(std::string(token));
    return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::is_negator(std::string_view token) const {
    return negators_.count(std::string(token)) != 0;
}

std::string fold_case(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) append_utf8(out, u_foldCase(next_code_point(text, pos), U_FOLD_CASE_DEFAULT));
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    bool in_run = false;
    UChar32 previous = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const UChar32 c = next_code_point(text, pos);
        if (in_run && continues_run(c)) {
            append_utf8(current, u_foldCase(c, U_FOLD_CASE_DEFAULT));
        } else if (starts_run(c)) {
            if (in_run) tokens.push_back(std::move(current));
            current.clear();
            if (!in_run && (previous == '#' || previous == '@'))
                current.push_back(static_cast<char>(previous));
            append_utf8(current, u_foldCase(c, U_FOLD_CASE_DEFAULT));
            in_run = true;
        } else if (in_run) {
            tokens.push_back(std::move(current));
            current.clear();
            in_run = false;
        }
        previous = c;
    }
    if (in_run) tokens.push_back(std::move(current));
    return tokens;
}

Lexicon load_lexicon(std::string_view content, std::string name, std::string version) {
    Lexicon lexicon;
    lexicon.name = std::move(name);
    lexicon.version = std::move(version);

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        std::string_view line = content.substr(start, end - start);
        start = end + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || line.front() == '#') continue;

        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw LexiconError(line_no, "missing TAB separator");
        const auto head = line.substr(0, tab);
        const auto tail = trim(line.substr(tab + 1));

        if (head == "!negator") {
            if (tail.empty()) throw LexiconError(line_no, "empty negator");
            lexicon.negators_.insert(single_token(tail, line_no));
            continue;
        }
        if (trim(head).empty()) throw LexiconError(line_no, "empty token");
        if (tail.empty()) throw LexiconError(line_no, "no emotion weights");
        std::string token = single_token(head, line_no);

        EmotionWeights weights{};
        std::size_t item_start = 0;
        while (item_start <= tail.size()) {
            auto comma = tail.find(',', item_start);
            if (comma == std::string_view::npos) comma = tail.size();
            const auto item = trim(tail.substr(item_start, comma - item_start));
            item_start = comma + 1;

            const auto colon = item.find(':');
            if (colon == std::string_view::npos)
                throw LexiconError(line_no, "expected emotion:weight, got '" + std::string(item) + "'");
            const auto label = parse_emotion(trim(item.substr(0, colon)));
            if (!label)
                throw LexiconError(line_no, "unknown emotion '" +
                                                std::string(trim(item.substr(0, colon))) + "'");
            const auto number = trim(item.substr(colon + 1));
            double weight = 0.0;
            const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), weight);
            if (ec != std::errc{} || ptr != number.data() + number.size() || number.empty())
                throw LexiconError(line_no, "malformed weight '" + std::string(number) + "'");
            if (!std::isfinite(weight) || weight <= 0.0 || weight > 1.0)
                throw LexiconRangeError(line_no, token, weight);
            auto& slot = weights[index_of(*label)];
            slot = std::max(slot, weight);
        }

        auto [it, inserted] = lexicon.entries_.try_emplace(std::move(token), weights);
        if (!inserted)
            for (std::size_t i = 0; i < kEmotionCount; ++i)
                it->second[i] = std::max(it->second[i], weights[i]);
    }
    return lexicon;
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StartupError(path.string(), "cannot read lexicon");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_lexicon(buffer.str(), path.stem().string());
}

EmotionScores score_tokens(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
    // Running product of (1 - w) per emotion; relevance is its complement.
    std::array<double, kEmotionCount> keep{1.0, 1.0, 1.0, 1.0, 1.0};
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto* weights = lexicon.find(tokens[i]);
        if (weights == nullptr) continue;
        bool negated = false;
        for (std::size_t back = 1; back <= kNegationWindow && back <= i; ++back)
            negated = negated || lexicon.is_negator(tokens[i - back]);
        if (negated) continue;
        for (std::size_t e = 0; e < kEmotionCount; ++e)
            if ((*weights)[e] > 0.0) keep[e] *= 1.0 - (*weights)[e];
    }
    EmotionScores scores;
    for (std::size_t e = 0; e < kEmotionCount; ++e) scores.values[e] = 1.0 - keep[e];
    return scores;
}

EmotionScores score_text(std::string_view text, const Lexicon& lexicon) {
    return score_tokens(tokenize(text), lexicon);
}

Emotion final_emotion(const EmotionScores& scores) noexcept {
    Emotion best = Emotion::anger;
    for (auto e : kEmotions)
        if (scores[e] > scores[best]) best = e;
    return best;
}

}  // namespace plexus
