#include "doctest.h"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "radlabel/text.hpp"
#include "radlabel/tokenizer.hpp"

using namespace radlabel;

namespace {

std::vector<std::string> texts(const std::vector<Token>& toks) {
    std::vector<std::string> out;
    for (const auto& t : toks) out.push_back(t.text);
    return out;
}

std::vector<Sentence> sentences_of(const std::string& s) {
    auto toks = tokenize(s);
    return split_sentences(toks, AbbreviationList::builtin());
}

const std::string kExample =
    "Chest 1 view, 8/21/2011:\nHistory: 50 years male, eval pleural effusion reaccum. with clamped chest tube.\n"
    "Comparison: none.\nImpression: 1. Increased right lower lobe opacity, concerning for infection. 2. No evidence "
    "of pneumothorax.";

} // namespace

TEST_CASE("decimal numbers stay whole and units are separate words") {
    auto t = tokenize("1.2 cm nodule");
    REQUIRE(t.size() == 3);
    CHECK(t[0].text == "1.2");
    CHECK(t[0].kind == TokenKind::Number);
    CHECK(t[1].kind == TokenKind::Word);
    CHECK(t[2].text == "nodule");
}

TEST_CASE("hyphenated compounds are one token") {
    auto t = tokenize("ground-glass opacities");
    REQUIRE(t.size() == 2);
    CHECK(t[0].text == "ground-glass");
    CHECK(t[0].kind == TokenKind::Compound);
    CHECK(t[1].kind == TokenKind::Word);
}

TEST_CASE("empty and blank text give no tokens") {
    CHECK(tokenize("").empty());
    CHECK(tokenize(" \n\t ").empty());
}

TEST_CASE("slash-joined terms and dates split into parts") {
    CHECK(texts(tokenize("opacity/consolidation")) == std::vector<std::string>{"opacity", "/", "consolidation"});
    auto d = tokenize("8/21/2011");
    REQUIRE(d.size() == 5);
    CHECK(d[0].kind == TokenKind::Number);
    CHECK(d[1].kind == TokenKind::Punct);
    CHECK(d[4].text == "2011");
}

TEST_CASE("glued number and unit is a measurement") {
    auto t = tokenize("1.2cm");
    REQUIRE(t.size() == 1);
    CHECK(t[0].kind == TokenKind::Measurement);
}

TEST_CASE("offsets address the source text") {
    std::string s = "  Small  effusion.";
    for (const auto& t : tokenize(s)) CHECK(s.substr(t.start, t.end - t.start) == t.text);
    auto shifted = tokenize("ab", 10);
    CHECK(shifted[0].start == 10);
}

TEST_CASE("round trip: tokens plus original gaps rebuild the input") {
    std::mt19937 rng(5);
    const std::string alphabet = "ab1.-/, :\n()xZ9é";
    for (int iter = 0; iter < 300; ++iter) {
        std::string s;
        std::size_t len = rng() % 40;
        for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
        auto toks = tokenize(s);
        std::string rebuilt;
        std::size_t pos = 0;
        for (const auto& t : toks) {
            rebuilt += s.substr(pos, t.start - pos);
            CHECK(std::all_of(s.begin() + pos, s.begin() + t.start, [](char c) { return text::is_space(c); }));
            rebuilt += t.text;
            pos = t.end;
        }
        rebuilt += s.substr(pos);
        CHECK(rebuilt == s);
    }
}

TEST_CASE("idempotence: re-tokenizing joined token texts is stable") {
    std::mt19937 rng(9);
    const std::string alphabet = "ab1.-/, :x9";
    for (int iter = 0; iter < 300; ++iter) {
        std::string s;
        std::size_t len = rng() % 30;
        for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
        auto first = texts(tokenize(s));
        std::string joined;
        for (const auto& t : first) joined += (joined.empty() ? "" : " ") + t;
        CHECK(texts(tokenize(joined)) == first);
    }
}

TEST_CASE("single terminator gives one sentence") { CHECK(sentences_of("No evidence of pneumothorax.").size() == 1); }

TEST_CASE("numbered list gives one sentence per item without the markers") {
    std::string s = "1. Increased right lower lobe opacity, concerning for infection. 2. No evidence of pneumothorax.";
    auto toks = tokenize(s);
    auto sents = split_sentences(toks, AbbreviationList::builtin());
    REQUIRE(sents.size() == 2);
    CHECK(toks[sents[0].tokens.begin].text == "Increased");
    CHECK(toks[sents[1].tokens.begin].text == "No");
    CHECK(toks[sents[1].tokens.end - 1].text == ".");
}

TEST_CASE("abbreviation period does not end the sentence") {
    CHECK(sentences_of("eval pleural effusion reaccum. with clamped chest tube.").size() == 1);
    CHECK(sentences_of("Seen by Dr. Smith today.").size() == 1);
    CHECK(sentences_of("Measures 1.2 cm. Stable.").size() == 2);
}

TEST_CASE("custom abbreviation lists replace the default") {
    auto list = AbbreviationList::parse("# local list\nfoo.\n");
    CHECK(list.contains("FOO."));
    CHECK_FALSE(list.contains("reaccum."));
    auto toks = tokenize("see foo. now.");
    CHECK(split_sentences(toks, list).size() == 1);
}

TEST_CASE("sentences partition tokens within sections") {
    Report r = sectionize("s1", kExample);
    for (const auto& sec : r.sections) {
        auto toks = tokenize(sec.text, sec.offset);
        auto sents = split_sentences(toks, AbbreviationList::builtin(), sec.name);
        std::size_t prev_end = 0;
        for (const auto& s : sents) {
            CHECK(s.tokens.begin >= prev_end);
            CHECK(s.tokens.end <= toks.size());
            CHECK(s.section == sec.name);
            prev_end = s.tokens.end;
        }
    }
}

TEST_CASE("paper example sections") {
    Report r = sectionize("s1", kExample);
    std::vector<std::string> names;
    for (const auto& s : r.sections) names.push_back(s.name);
    CHECK(names == std::vector<std::string>{"preamble", "History", "Comparison", "Impression"});
    CHECK(r.sections[1].header == "History:");
    CHECK(kExample.substr(r.sections[3].offset, r.sections[3].text.size()) == r.sections[3].text);
}

TEST_CASE("text without headers is all preamble") {
    Report r = sectionize("s1", "Portable chest. Mild edema.");
    REQUIRE(r.sections.size() == 1);
    CHECK(r.sections[0].name == kPreamble);
}

TEST_CASE("a lone header gives one empty section") {
    Report r = sectionize("s1", "Impression:\n");
    REQUIRE(r.sections.size() == 1);
    CHECK(r.sections[0].name == "Impression");
    CHECK(tokenize(r.sections[0].text).empty());
}

TEST_CASE("headers match case-insensitively and keep canonical names") {
    Report r = sectionize("s1", "FINDINGS: effusion.\n  impression: none.");
    REQUIRE(r.sections.size() == 2);
    CHECK(r.sections[0].name == "Findings");
    CHECK(r.sections[1].name == "Impression");
}
