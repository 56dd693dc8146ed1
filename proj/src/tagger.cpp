#include "radlabel/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "embedded_data.hpp"
#include "radlabel/errors.hpp"
#include "radlabel/text.hpp"

namespace radlabel {

const char* entity_type_name(EntityType t) {
    switch (t) {
    case EntityType::Anat: return "ANAT";
    case EntityType::Obs: return "OBS";
    case EntityType::Mod: return "MOD";
    case EntityType::Neg: return "NEG";
    }
    return "OBS";
}

std::optional<EntityType> parse_entity_type(std::string_view s) {
    if (s == "ANAT") return EntityType::Anat;
    if (s == "OBS") return EntityType::Obs;
    if (s == "MOD") return EntityType::Mod;
    if (s == "NEG") return EntityType::Neg;
    return std::nullopt;
}

const char* tag_name(Tag t) {
    switch (t) {
    case Tag::Anat: return "ANAT";
    case Tag::Obs: return "OBS";
    case Tag::Mod: return "MOD";
    case Tag::Neg: return "NEG";
    case Tag::O: return "O";
    }
    return "O";
}

namespace {

std::string phrase_key(std::span<const Token> tokens) {
    std::string key;
    for (const auto& t : tokens) {
        if (!key.empty()) key += ' ';
        key += text::fold_case(t.text);
    }
    return key;
}

std::optional<LexType> parse_lex_type(std::string_view s) {
    if (s == "ANAT") return LexType::Anat;
    if (s == "OBS") return LexType::Obs;
    if (s == "MOD") return LexType::Mod;
    if (s == "NEG") return LexType::Neg;
    if (s == "HEDGE") return LexType::Hedge;
    return std::nullopt;
}

Tag tag_for(LexType t) {
    switch (t) {
    case LexType::Anat: return Tag::Anat;
    case LexType::Obs: return Tag::Obs;
    case LexType::Mod: return Tag::Mod;
    case LexType::Neg: return Tag::Neg;
    case LexType::Hedge: return Tag::O;
    }
    return Tag::O;
}

EntityType entity_type_for(Tag t) {
    switch (t) {
    case Tag::Anat: return EntityType::Anat;
    case Tag::Obs: return EntityType::Obs;
    case Tag::Mod: return EntityType::Mod;
    case Tag::Neg: return EntityType::Neg;
    case Tag::O: break;
    }
    throw ContractError("tag O has no entity type");
}

std::string surface(std::span<const Token> tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0 && tokens[i].start > tokens[i - 1].end) out += ' ';
        out += tokens[i].text;
    }
    return out;
}

} // namespace

Lexicon Lexicon::parse(std::string_view body, std::string source) {
    Lexicon lex;
    lex.source_ = std::move(source);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto nl = body.find('\n', pos);
        auto raw = body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? body.size() + 1 : nl + 1;

        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto where = [&] { return lex.source_ + ":" + std::to_string(line_no) + ": "; };

        auto fields = text::split(line, '\t');
        if (fields.size() < 2 || fields.size() > 3) throw InputError(where() + "expected phrase<TAB>TYPE[<TAB>ATTR]");
        auto phrase_tokens = tokenize(text::trim(fields[0]));
        if (phrase_tokens.empty()) throw InputError(where() + "empty phrase");
        auto type = parse_lex_type(std::string(text::trim(fields[1])));
        if (!type) throw InputError(where() + "unknown type '" + fields[1] + "'");

        LexiconEntry entry;
        entry.type = *type;
        for (const auto& t : phrase_tokens) entry.tokens.push_back(text::fold_case(t.text));
        if (fields.size() == 3) {
            auto attr = std::string(text::trim(fields[2]));
            if (entry.type == LexType::Obs) {
                entry.condition = parse_condition(attr);
                if (!entry.condition || *entry.condition == Condition::NoFinding) {
                    throw InputError(where() + "unknown condition '" + attr + "'");
                }
            } else if (entry.type == LexType::Mod && attr == "LOC") {
                entry.locative = true;
            } else if (entry.type == LexType::Mod && attr == "HEDGE") {
                entry.hedge = true;
            } else {
                throw InputError(where() + "attribute '" + attr + "' not valid for " + fields[1]);
            }
        }
        auto key = phrase_key(phrase_tokens);
        if (lex.entries_.count(key)) throw InputError(where() + "duplicate phrase '" + key + "'");
        lex.max_tokens_ = std::max(lex.max_tokens_, entry.tokens.size());
        lex.entries_.emplace(std::move(key), std::move(entry));
    }
    return lex;
}

Lexicon Lexicon::load(const std::string& path) { return parse(text::read_file(path), path); }

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = parse(embedded::default_lexicon, "<builtin>");
    return lex;
}

const LexiconEntry* Lexicon::find(std::string_view phrase) const {
    auto it = entries_.find(std::string(phrase));
    return it == entries_.end() ? nullptr : &it->second;
}

const LexiconEntry* Lexicon::find_text(std::string_view surface_text) const {
    auto tokens = tokenize(surface_text);
    return find(phrase_key(tokens));
}

std::vector<std::string> Lexicon::condition_phrases(Condition c) const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_) {
        if (entry.condition == c) out.push_back(key);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<LexiconMatch> match_lexicon(std::span<const Token> tokens, const Lexicon& lexicon) {
    std::vector<LexiconMatch> matches;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t longest = std::min(lexicon.max_phrase_tokens(), tokens.size() - i);
        bool hit = false;
        for (std::size_t len = longest; len >= 1; --len) {
            if (const auto* entry = lexicon.find(phrase_key(tokens.subspan(i, len)))) {
                matches.push_back({{i, i + len}, entry->type, entry});
                i += len;
                hit = true;
                break;
            }
        }
        if (!hit) ++i;
    }
    return matches;
}

namespace {

void require_decodable(const ScoreTable& table) {
    if (table.length() == 0) throw InputError("cannot decode an empty sequence");
    for (const auto& row : table.emissions) {
        for (double v : row) {
            if (!std::isfinite(v)) throw InputError("non-finite emission score");
        }
    }
    for (const auto& row : table.transitions) {
        for (double v : row) {
            if (!std::isfinite(v)) throw InputError("non-finite transition score");
        }
    }
}

} // namespace

double sequence_score(const ScoreTable& table, std::span<const Tag> tags) {
    if (tags.size() != table.length()) throw ContractError("tag sequence length does not match table");
    if (tags.empty()) return 0.0;
    double score = table.emissions[0][static_cast<std::size_t>(tags[0])];
    for (std::size_t i = 1; i < tags.size(); ++i) {
        auto prev = static_cast<std::size_t>(tags[i - 1]);
        auto cur = static_cast<std::size_t>(tags[i]);
        score += table.transitions[prev][cur];
        score += table.emissions[i][cur];
    }
    return score;
}

Decoding viterbi_decode(const ScoreTable& table) {
    require_decodable(table);
    const std::size_t n = table.length();
    using Row = std::array<double, kTagCount>;
    using Ranks = std::array<std::size_t, kTagCount>;

    // rank[t] orders the best prefixes ending in t lexicographically, so exact
    // score ties can be resolved towards the smallest full sequence.
    Row delta = table.emissions[0];
    Ranks rank;
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::vector<std::array<std::size_t, kTagCount>> back(n);

    for (std::size_t i = 1; i < n; ++i) {
        Row next{};
        auto& bp = back[i];
        for (std::size_t t = 0; t < kTagCount; ++t) {
            double best = -std::numeric_limits<double>::infinity();
            std::size_t arg = 0;
            for (std::size_t p = 0; p < kTagCount; ++p) {
                double v = delta[p] + table.transitions[p][t];
                v += table.emissions[i][t];
                if (v > best || (v == best && rank[p] < rank[arg])) {
                    best = v;
                    arg = p;
                }
            }
            next[t] = best;
            bp[t] = arg;
        }
        std::array<std::size_t, kTagCount> order;
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (rank[bp[a]] != rank[bp[b]]) return rank[bp[a]] < rank[bp[b]];
            return a < b;
        });
        Ranks next_rank{};
        for (std::size_t r = 0; r < kTagCount; ++r) next_rank[order[r]] = r;
        delta = next;
        rank = next_rank;
    }

    std::size_t last = 0;
    for (std::size_t t = 1; t < kTagCount; ++t) {
        if (delta[t] > delta[last] || (delta[t] == delta[last] && rank[t] < rank[last])) last = t;
    }
    Decoding out;
    out.score = delta[last];
    out.tags.resize(n);
    std::size_t cur = last;
    for (std::size_t i = n; i-- > 0;) {
        out.tags[i] = static_cast<Tag>(cur);
        if (i > 0) cur = back[i][cur];
    }
    return out;
}

Decoding brute_force_decode(const ScoreTable& table) {
    if (table.length() > kBruteForceMaxLength) {
        throw SizeError("brute-force decoding is limited to " + std::to_string(kBruteForceMaxLength) + " positions");
    }
    require_decodable(table);
    const std::size_t n = table.length();
    std::vector<Tag> tags(n, Tag::Anat);
    Decoding best{tags, sequence_score(table, tags)};
    // Odometer with position 0 as the most significant digit: visiting order
    // is lexicographic, so the first maximum found is the smallest one.
    while (true) {
        std::size_t i = n;
        while (i > 0) {
            auto& d = tags[i - 1];
            if (static_cast<std::size_t>(d) + 1 < kTagCount) {
                d = static_cast<Tag>(static_cast<std::size_t>(d) + 1);
                break;
            }
            d = Tag::Anat;
            --i;
        }
        if (i == 0) break;
        double s = sequence_score(table, tags);
        if (s > best.score) best = {tags, s};
    }
    return best;
}

std::vector<Entity> tag_entities(std::span<const Token> tokens, const Lexicon& lexicon, const ScoreTable* table,
                                 double boost) {
    std::vector<Entity> entities;
    if (tokens.empty()) return entities;

    std::vector<LexiconMatch> spans;
    for (auto& m : match_lexicon(tokens, lexicon)) {
        if (m.type != LexType::Hedge) spans.push_back(m);
    }

    auto make = [&](TokenRange r, EntityType type) {
        Entity e;
        e.tokens = r;
        e.type = type;
        e.text = surface(tokens.subspan(r.begin, r.size()));
        entities.push_back(std::move(e));
    };

    if (table == nullptr) {
        for (const auto& m : spans) make(m.tokens, entity_type_for(tag_for(m.type)));
        return entities;
    }

    ScoreTable scores = *table;
    if (scores.emissions.empty()) {
        scores.emissions.assign(tokens.size(), {});
    } else if (scores.emissions.size() != tokens.size()) {
        throw ContractError("score table length " + std::to_string(scores.emissions.size()) +
                            " does not match sentence length " + std::to_string(tokens.size()));
    }
    for (const auto& m : spans) {
        auto tag = static_cast<std::size_t>(tag_for(m.type));
        for (std::size_t i = m.tokens.begin; i < m.tokens.end; ++i) scores.emissions[i][tag] += boost;
    }
    auto decoded = viterbi_decode(scores);

    std::vector<std::pair<TokenRange, Tag>> runs;
    for (std::size_t i = 0; i < decoded.tags.size();) {
        std::size_t j = i;
        while (j < decoded.tags.size() && decoded.tags[j] == decoded.tags[i]) ++j;
        if (decoded.tags[i] != Tag::O) runs.push_back({{i, j}, decoded.tags[i]});
        i = j;
    }
    // Both lists are sorted and internally disjoint, so the intersections come out ordered.
    for (const auto& m : spans) {
        for (const auto& [r, tag] : runs) {
            std::size_t b = std::max(r.begin, m.tokens.begin);
            std::size_t e = std::min(r.end, m.tokens.end);
            if (b < e) make({b, e}, entity_type_for(tag));
        }
    }
    return entities;
}

} // namespace radlabel
