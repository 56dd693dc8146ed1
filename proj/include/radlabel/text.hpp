#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace radlabel::text {

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_letter(char c) {
    auto u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80;
}

inline bool is_alnum(char c) { return is_letter(c) || is_digit(c); }

// ASCII case folding; non-ASCII bytes pass through unchanged.
std::string fold_case(std::string_view s);

std::string_view trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Non-blank, non-comment ('#') lines, trimmed.
std::vector<std::string_view> content_lines(std::string_view s);

std::string read_file(const std::string& path);

// "%.12g": the fixed output precision used by every exported number.
std::string format_number(double v);

// Case-insensitive set of words loaded from a one-per-line list.
class WordSet {
public:
    WordSet() = default;
    static WordSet parse(std::string_view body);

    bool contains(std::string_view word) const { return words_.count(fold_case(word)) > 0; }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

} // namespace radlabel::text
