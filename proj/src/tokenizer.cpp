#include "radlabel/tokenizer.hpp"

#include <algorithm>

#include "embedded_data.hpp"
#include "radlabel/text.hpp"

namespace radlabel {

using text::is_alnum;
using text::is_digit;
using text::is_space;

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
    case TokenKind::Word: return "WORD";
    case TokenKind::Number: return "NUMBER";
    case TokenKind::Measurement: return "MEASUREMENT";
    case TokenKind::Punct: return "PUNCT";
    case TokenKind::Compound: return "COMPOUND";
    }
    return "WORD";
}

namespace {

// An alphanumeric run; a '.' is absorbed only between two digits.
std::size_t scan_segment(std::string_view s, std::size_t i) {
    std::size_t j = i;
    while (j < s.size()) {
        if (is_alnum(s[j])) {
            ++j;
        } else if (s[j] == '.' && j > i && is_digit(s[j - 1]) && j + 1 < s.size() && is_digit(s[j + 1])) {
            ++j;
        } else {
            break;
        }
    }
    return j;
}

TokenKind segment_kind(std::string_view seg) {
    if (!is_digit(seg.front())) return TokenKind::Word;
    bool numeric = std::all_of(seg.begin(), seg.end(), [](char c) { return is_digit(c) || c == '.'; });
    return numeric ? TokenKind::Number : TokenKind::Measurement;
}

} // namespace

std::vector<Token> tokenize(std::string_view s, std::size_t base_offset) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (!is_alnum(c)) {
            tokens.push_back({std::string(1, c), base_offset + i, base_offset + i + 1, TokenKind::Punct});
            ++i;
            continue;
        }
        std::size_t j = scan_segment(s, i);
        TokenKind kind = segment_kind(s.substr(i, j - i));
        while (j + 1 < s.size() && s[j] == '-' && is_alnum(s[j + 1])) {
            j = scan_segment(s, j + 1);
            kind = TokenKind::Compound;
        }
        tokens.push_back({std::string(s.substr(i, j - i)), base_offset + i, base_offset + j, kind});
        i = j;
    }
    return tokens;
}

AbbreviationList::AbbreviationList(std::vector<std::string> entries) {
    for (auto& e : entries) entries_.insert(text::fold_case(e));
}

AbbreviationList AbbreviationList::parse(std::string_view body) {
    std::vector<std::string> entries;
    for (auto line : text::content_lines(body)) entries.emplace_back(line);
    return AbbreviationList(std::move(entries));
}

AbbreviationList AbbreviationList::load(const std::string& path) {
    return parse(text::read_file(path));
}

const AbbreviationList& AbbreviationList::builtin() {
    static const AbbreviationList list = parse(embedded::abbreviations);
    return list;
}

bool AbbreviationList::contains(std::string_view candidate) const {
    return entries_.count(text::fold_case(candidate)) > 0;
}

namespace {

bool adjacent(const Token& a, const Token& b) { return a.end == b.start; }

bool is_terminator(const Token& t) {
    return t.kind == TokenKind::Punct && (t.text == "." || t.text == "!" || t.text == "?");
}

bool is_closer(const Token& t) {
    return t.kind == TokenKind::Punct &&
           (t.text == "." || t.text == "!" || t.text == "?" || t.text == ")" || t.text == "\"" || t.text == "'");
}

bool is_list_marker(std::span<const Token> tokens, std::size_t i) {
    if (i + 1 >= tokens.size()) return false;
    const Token& num = tokens[i];
    const Token& mark = tokens[i + 1];
    if (num.kind != TokenKind::Number || num.text.size() > 2) return false;
    if (num.text.find('.') != std::string::npos) return false;
    if (mark.kind != TokenKind::Punct || (mark.text != "." && mark.text != ")")) return false;
    if (!adjacent(num, mark)) return false;
    return i + 2 == tokens.size() || !adjacent(mark, tokens[i + 2]);
}

// True when the period at `i` closes an abbreviation written as a run of
// glued tokens ("reaccum.", "a.m.").
bool closes_abbreviation(std::span<const Token> tokens, std::size_t i, const AbbreviationList& abbreviations) {
    if (abbreviations.size() == 0) return false;
    std::size_t first = i;
    while (first > 0 && adjacent(tokens[first - 1], tokens[first])) --first;
    for (std::size_t from = first; from < i; ++from) {
        std::string candidate;
        for (std::size_t k = from; k <= i; ++k) candidate += tokens[k].text;
        if (abbreviations.contains(candidate)) return true;
    }
    return false;
}

} // namespace

std::vector<Sentence> split_sentences(std::span<const Token> tokens, const AbbreviationList& abbreviations,
                                      std::string_view section, std::size_t base_index) {
    std::vector<Sentence> sentences;
    auto emit = [&](std::size_t b, std::size_t e) {
        if (e > b) sentences.push_back({{base_index + b, base_index + e}, std::string(section)});
    };

    std::size_t begin = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (i == begin && is_list_marker(tokens, i)) {
            i += 2;
            begin = i;
            continue;
        }
        const Token& t = tokens[i];
        bool boundary = is_terminator(t);
        if (boundary && t.text == ".") {
            if (i > 0 && adjacent(tokens[i - 1], t) && tokens[i - 1].kind == TokenKind::Number) boundary = false;
            else if (closes_abbreviation(tokens, i, abbreviations)) boundary = false;
        }
        if (boundary) {
            while (i + 1 < tokens.size() && is_closer(tokens[i + 1]) && adjacent(tokens[i], tokens[i + 1])) ++i;
            emit(begin, i + 1);
            begin = i + 1;
        }
        ++i;
    }
    emit(begin, tokens.size());
    return sentences;
}

std::vector<std::string> default_section_headers() {
    return {"History", "Comparison", "Impression", "Findings", "Indication"};
}

namespace {

// Returns the canonical header name if the line opens a section, with
// `colon` set to the position just past the ':'.
const std::string* match_header(std::string_view line, const std::vector<std::string>& headers, std::size_t& colon) {
    std::size_t b = 0;
    while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
    auto c = line.find(':', b);
    if (c == std::string_view::npos) return nullptr;
    auto name = text::fold_case(text::trim(line.substr(b, c - b)));
    for (const auto& h : headers) {
        if (text::fold_case(h) == name) {
            colon = c + 1;
            return &h;
        }
    }
    return nullptr;
}

} // namespace

Report sectionize(std::string study_id, std::string raw, const std::vector<std::string>& headers) {
    Report report;
    report.study_id = std::move(study_id);
    report.text = std::move(raw);
    std::string_view s = report.text;

    struct Open {
        const std::string* name;
        std::size_t line_start;
        std::size_t body_start;
    };
    std::vector<Open> opens;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto nl = s.find('\n', pos);
        std::size_t line_end = nl == std::string_view::npos ? s.size() : nl;
        std::size_t colon = 0;
        if (const auto* h = match_header(s.substr(pos, line_end - pos), headers, colon)) {
            opens.push_back({h, pos, pos + colon});
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }

    std::size_t preamble_end = opens.empty() ? s.size() : opens.front().line_start;
    if (opens.empty() || preamble_end > 0) {
        report.sections.push_back({std::string(kPreamble), "", std::string(s.substr(0, preamble_end)), 0});
    }
    for (std::size_t k = 0; k < opens.size(); ++k) {
        std::size_t end = k + 1 < opens.size() ? opens[k + 1].line_start : s.size();
        const auto& o = opens[k];
        report.sections.push_back({*o.name, std::string(s.substr(o.line_start, o.body_start - o.line_start)),
                                   std::string(s.substr(o.body_start, end - o.body_start)), o.body_start});
    }
    return report;
}

} // namespace radlabel
