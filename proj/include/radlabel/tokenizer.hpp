#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace radlabel {

enum class TokenKind { Word, Number, Measurement, Punct, Compound };

const char* token_kind_name(TokenKind kind);

// Half-open character range [start, end) into the raw report text.
struct Token {
    std::string text;
    std::size_t start = 0;
    std::size_t end = 0;
    TokenKind kind = TokenKind::Word;

    bool operator==(const Token&) const = default;
};

// Half-open index range into a token sequence.
struct TokenRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool empty() const { return begin == end; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }
    bool operator==(const TokenRange&) const = default;
};

struct Sentence {
    TokenRange tokens;
    std::string section;

    bool operator==(const Sentence&) const = default;
};

struct Section {
    std::string name;
    std::string header;      // raw header text including the colon; empty for the preamble
    std::string text;        // raw body text following the header
    std::size_t offset = 0;  // position of `text` in the report
};

struct Report {
    std::string study_id;
    std::string text;
    std::vector<Section> sections;
};

inline constexpr std::string_view kPreamble = "preamble";

// Splits raw text into tokens. Offsets are shifted by `base_offset`, which lets
// callers tokenize a section body in place. Bytes >= 0x80 are treated as
// letters so UTF-8 words stay intact.
std::vector<Token> tokenize(std::string_view text, std::size_t base_offset = 0);

class AbbreviationList {
public:
    AbbreviationList() = default;
    explicit AbbreviationList(std::vector<std::string> entries);

    // One abbreviation per line, '#' comments and blank lines ignored.
    static AbbreviationList parse(std::string_view text);
    static AbbreviationList load(const std::string& path);
    static const AbbreviationList& builtin();

    bool contains(std::string_view candidate) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_set<std::string> entries_;
};

// Sentence boundaries fall after '.', '!' or '?' unless the period closes a
// number or a listed abbreviation. Leading list markers ("1.", "2)") start a
// new sentence and are left out of every sentence body. Ranges are offset by
// `base_index` so per-section calls can address a report-wide token vector.
std::vector<Sentence> split_sentences(std::span<const Token> tokens,
                                      const AbbreviationList& abbreviations,
                                      std::string_view section = kPreamble,
                                      std::size_t base_index = 0);

std::vector<std::string> default_section_headers();

// Lines of the form "<Header>:" (case-insensitive, leading blanks allowed)
// open a section named by the canonical spelling in `headers`.
Report sectionize(std::string study_id, std::string text,
                  const std::vector<std::string>& headers = default_section_headers());

} // namespace radlabel
