#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace plexus {

// The five emotion modes. Declaration order is the canonical order used for
// serialization and tie-breaking.
enum class Emotion : std::uint8_t { anger, disgust, fear, joy, sadness };

inline constexpr std::size_t kEmotionCount = 5;
inline constexpr std::array<Emotion, kEmotionCount> kEmotions = {
    Emotion::anger, Emotion::disgust, Emotion::fear, Emotion::joy, Emotion::sadness};

std::string_view to_string(Emotion e) noexcept;
std::optional<Emotion> parse_emotion(std::string_view name) noexcept;

constexpr std::size_t index_of(Emotion e) noexcept { return static_cast<std::size_t>(e); }

// Five independent relevances in [0,1]. They do not sum to one.
struct EmotionScores {
    std::array<double, kEmotionCount> values{};

    double& operator[](Emotion e) noexcept { return values[index_of(e)]; }
    double operator[](Emotion e) const noexcept { return values[index_of(e)]; }

    bool all_zero() const noexcept;

    friend bool operator==(const EmotionScores&, const EmotionScores&) = default;
};

// Per-emotion weights of one lexicon token; 0 means "no membership".
using EmotionWeights = std::array<double, kEmotionCount>;

// Immutable after construction; safe to share across threads.
class Lexicon {
public:
    Lexicon() = default;

    const EmotionWeights* find(std::string_view token) const;
    bool is_negator(std::string_view token) const;

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t negator_count() const noexcept { return negators_.size(); }

    const std::unordered_map<std::string, EmotionWeights>& entries() const noexcept {
        return entries_;
    }
    const std::unordered_set<std::string>& negators() const noexcept { return negators_; }

    std::string name;
    std::string version;

private:
    friend Lexicon load_lexicon(std::string_view, std::string, std::string);

    std::unordered_map<std::string, EmotionWeights> entries_;
    std::unordered_set<std::string> negators_;
};

// Unicode simple case folding of a UTF-8 string. Invalid bytes become U+FFFD.
std::string fold_case(std::string_view text);

// Maximal runs of letters/digits, each optionally carrying one directly
// preceding '#' or '@'; case-folded; punctuation and whitespace dropped.
std::vector<std::string> tokenize(std::string_view text);

// Parses the line-oriented lexicon format:
//   token<TAB>emotion:weight[,emotion:weight...]
//   !negator<TAB>token
//   # comment
// Duplicate tokens merge by per-emotion maximum. Throws LexiconError /
// LexiconRangeError.
Lexicon load_lexicon(std::string_view content, std::string name = {}, std::string version = {});

// Reads and parses a lexicon file; the name defaults to the file stem.
// Throws StartupError when the file cannot be read.
Lexicon load_lexicon_file(const std::filesystem::path& path);

// Number of preceding tokens inspected for a negator.
inline constexpr std::size_t kNegationWindow = 2;

// Noisy-OR over non-negated lexicon matches: relevance_e = 1 - prod(1 - w_e).
EmotionScores score_tokens(const std::vector<std::string>& tokens, const Lexicon& lexicon);
EmotionScores score_text(std::string_view text, const Lexicon& lexicon);

// Argmax; ties go to the earliest label in canonical order.
Emotion final_emotion(const EmotionScores& scores) noexcept;

}  // namespace plexus
