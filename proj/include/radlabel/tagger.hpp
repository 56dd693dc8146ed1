#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "radlabel/condition.hpp"
#include "radlabel/tokenizer.hpp"

namespace radlabel {

enum class EntityType { Anat, Obs, Mod, Neg };

const char* entity_type_name(EntityType t);
std::optional<EntityType> parse_entity_type(std::string_view s);

struct Entity {
    int id = 0;
    TokenRange tokens;  // report-wide token indices
    std::string text;
    EntityType type = EntityType::Obs;
    int sentence = 0;
    std::string section;

    bool operator==(const Entity&) const = default;
};

// Lexicon phrase classes. Hedge phrases are consumed by relation extraction
// and never become entities.
enum class LexType { Anat, Obs, Mod, Neg, Hedge };

struct LexiconEntry {
    std::vector<std::string> tokens;  // case-folded token texts
    LexType type = LexType::Obs;
    std::optional<Condition> condition;  // OBS only
    bool locative = false;               // MOD only: attaches to anatomy first
    bool hedge = false;                  // MOD only: marks uncertainty
};

class Lexicon {
public:
    // Format: "phrase<TAB>TYPE[<TAB>ATTR]" per line, '#' comments.
    static Lexicon parse(std::string_view body, std::string source = "<memory>");
    static Lexicon load(const std::string& path);
    static const Lexicon& builtin();

    // `phrase` is a case-folded, single-space joined token sequence.
    const LexiconEntry* find(std::string_view phrase) const;
    const LexiconEntry* find_text(std::string_view surface) const;

    std::size_t size() const { return entries_.size(); }
    std::size_t max_phrase_tokens() const { return max_tokens_; }
    const std::string& source() const { return source_; }

    std::vector<std::string> condition_phrases(Condition c) const;

private:
    std::unordered_map<std::string, LexiconEntry> entries_;
    std::size_t max_tokens_ = 0;
    std::string source_;
};

struct LexiconMatch {
    TokenRange tokens;  // relative to the matched span
    LexType type = LexType::Obs;
    const LexiconEntry* entry = nullptr;
};

// Greedy longest match, left to right, case-insensitive. Matches never overlap.
std::vector<LexiconMatch> match_lexicon(std::span<const Token> tokens, const Lexicon& lexicon);

enum class Tag : std::uint8_t { Anat = 0, Obs = 1, Mod = 2, Neg = 3, O = 4 };

inline constexpr std::size_t kTagCount = 5;

const char* tag_name(Tag t);

// Linear-chain scores. transitions[prev][cur]; emissions[position][tag].
struct ScoreTable {
    std::vector<std::array<double, kTagCount>> emissions;
    std::array<std::array<double, kTagCount>, kTagCount> transitions{};

    std::size_t length() const { return emissions.size(); }
};

struct Decoding {
    std::vector<Tag> tags;
    double score = 0.0;

    bool operator==(const Decoding&) const = default;
};

// e(0, y0) + sum_{i>=1} [s(y_{i-1}, y_i) + e(i, y_i)], accumulated left to right.
double sequence_score(const ScoreTable& table, std::span<const Tag> tags);

// Highest-scoring tag sequence. Among equal scores the lexicographically
// smallest sequence in tag order (ANAT < OBS < MOD < NEG < O) wins.
Decoding viterbi_decode(const ScoreTable& table);

inline constexpr std::size_t kBruteForceMaxLength = 8;

// Exhaustive search over all 5^n sequences with the same tie rule.
Decoding brute_force_decode(const ScoreTable& table);

inline constexpr double kDefaultEmissionBoost = 5.0;

// Entities for one sentence, token ranges relative to `tokens`. Without a
// table lexicon matches are used directly. With one, matched tags receive
// +`boost` on top of the table's emissions (zero when the table has none),
// the sequence is decoded, and each maximal same-tag run is intersected with
// the lexicon spans. Ids, sentence and section are left for the caller.
std::vector<Entity> tag_entities(std::span<const Token> tokens, const Lexicon& lexicon,
                                 const ScoreTable* table = nullptr, double boost = kDefaultEmissionBoost);

} // namespace radlabel
