#include "radlabel/relations.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

#include "radlabel/errors.hpp"

namespace radlabel {

const char* relation_type_name(RelationType t) {
    switch (t) {
    case RelationType::LocatedAt: return "LOCATED_AT";
    case RelationType::SuggestiveOf: return "SUGGESTIVE_OF";
    case RelationType::Modify: return "MODIFY";
    case RelationType::Negation: return "NEGATION";
    }
    return "MODIFY";
}

std::optional<RelationType> parse_relation_type(std::string_view s) {
    if (s == "LOCATED_AT") return RelationType::LocatedAt;
    if (s == "SUGGESTIVE_OF") return RelationType::SuggestiveOf;
    if (s == "MODIFY") return RelationType::Modify;
    if (s == "NEGATION") return RelationType::Negation;
    return std::nullopt;
}

const Entity* ReportGraph::entity(int id) const {
    for (const auto& e : entities) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

namespace {

// Token gap between two disjoint ranges.
std::size_t distance(const TokenRange& a, const TokenRange& b) {
    return a.end <= b.begin ? b.begin - a.end : a.begin - b.end;
}

bool is_clause_break(const Token& t) {
    return t.kind == TokenKind::Punct && (t.text == "," || t.text == ";" || t.text == ":");
}

bool signature_ok(RelationType r, EntityType src, EntityType dst) {
    switch (r) {
    case RelationType::Modify: return src == EntityType::Mod && (dst == EntityType::Obs || dst == EntityType::Anat);
    case RelationType::LocatedAt: return src == EntityType::Obs && dst == EntityType::Anat;
    case RelationType::SuggestiveOf: return src == EntityType::Obs && dst == EntityType::Obs;
    case RelationType::Negation: return src == EntityType::Neg && dst == EntityType::Obs;
    }
    return false;
}

const Entity* nearest_following(std::span<const Entity> entities, std::size_t from, EntityType type) {
    for (std::size_t k = from + 1; k < entities.size(); ++k) {
        if (entities[k].type == type) return &entities[k];
    }
    return nullptr;
}

} // namespace

std::vector<Relation> extract_relations(std::span<const Entity> entities, std::span<const Token> tokens,
                                        const Sentence& sentence, const Lexicon& lexicon) {
    std::vector<Relation> out;
    for (const auto& e : entities) {
        if (e.tokens.begin < sentence.tokens.begin || e.tokens.end > sentence.tokens.end) {
            throw ContractError("entity '" + e.text + "' lies outside its sentence");
        }
    }

    // Hedge connectors live only in the lexicon match stream.
    auto sentence_tokens = tokens.subspan(sentence.tokens.begin, sentence.tokens.size());
    std::vector<TokenRange> hedges;
    for (const auto& m : match_lexicon(sentence_tokens, lexicon)) {
        if (m.type == LexType::Hedge) {
            hedges.push_back({m.tokens.begin + sentence.tokens.begin, m.tokens.end + sentence.tokens.begin});
        }
    }
    for (const auto& e : entities) {
        if (e.type != EntityType::Mod) continue;
        const auto* entry = lexicon.find_text(e.text);
        if (entry && entry->hedge) hedges.push_back(e.tokens);
    }
    std::sort(hedges.begin(), hedges.end(), [](const TokenRange& a, const TokenRange& b) { return a.begin < b.begin; });

    auto same_clause = [&](const TokenRange& a, const TokenRange& b) {
        std::size_t lo = std::min(a.end, b.end);
        std::size_t hi = std::max(a.begin, b.begin);
        for (std::size_t i = lo; i < hi; ++i) {
            if (is_clause_break(tokens[i])) return false;
        }
        for (const auto& h : hedges) {
            if (h.begin >= lo && h.end <= hi) return false;
        }
        return true;
    };

    // MODIFY
    for (std::size_t k = 0; k < entities.size(); ++k) {
        const auto& e = entities[k];
        if (e.type != EntityType::Mod) continue;
        const auto* entry = lexicon.find_text(e.text);
        bool locative = entry && entry->locative;
        EntityType first = locative ? EntityType::Anat : EntityType::Obs;
        EntityType second = locative ? EntityType::Obs : EntityType::Anat;
        const Entity* head = nearest_following(entities, k, first);
        if (!head) head = nearest_following(entities, k, second);
        if (head) out.push_back({e.id, head->id, RelationType::Modify});
    }

    // LOCATED_AT
    for (std::size_t k = 0; k < entities.size(); ++k) {
        const auto& e = entities[k];
        if (e.type != EntityType::Obs) continue;
        const Entity* best = nullptr;
        for (const auto& a : entities) {
            if (a.type != EntityType::Anat || !same_clause(e.tokens, a.tokens)) continue;
            if (!best) {
                best = &a;
                continue;
            }
            auto d = distance(e.tokens, a.tokens);
            auto bd = distance(e.tokens, best->tokens);
            bool a_precedes = a.tokens.end <= e.tokens.begin;
            if (d < bd || (d == bd && a_precedes)) best = &a;
        }
        if (best) out.push_back({e.id, best->id, RelationType::LocatedAt});
    }

    // SUGGESTIVE_OF: one per source finding, first hedge wins.
    std::set<int> suggestive_sources;
    for (const auto& h : hedges) {
        const Entity* src = nullptr;
        const Entity* dst = nullptr;
        for (const auto& e : entities) {
            if (e.type != EntityType::Obs) continue;
            if (e.tokens.end <= h.begin) src = &e;
            if (!dst && e.tokens.begin >= h.end) dst = &e;
        }
        if (src && dst && src->id != dst->id && suggestive_sources.insert(src->id).second) {
            out.push_back({src->id, dst->id, RelationType::SuggestiveOf});
        }
    }

    // NEGATION
    for (std::size_t k = 0; k < entities.size(); ++k) {
        if (entities[k].type != EntityType::Neg) continue;
        if (const auto* obs = nearest_following(entities, k, EntityType::Obs)) {
            out.push_back({entities[k].id, obs->id, RelationType::Negation});
        }
    }
    return out;
}

void validate_graph(const ReportGraph& g) {
    std::map<int, const Entity*> by_id;
    for (const auto& e : g.entities) {
        if (!by_id.emplace(e.id, &e).second) throw IntegrityError("duplicate entity id " + std::to_string(e.id));
        if (e.tokens.end <= e.tokens.begin) throw IntegrityError("entity " + std::to_string(e.id) + " has an empty token range");
    }
    std::set<Relation> seen;
    for (const auto& r : g.relations) {
        auto s = by_id.find(r.src);
        auto d = by_id.find(r.dst);
        if (s == by_id.end() || d == by_id.end()) {
            throw IntegrityError("relation " + std::to_string(r.src) + "->" + std::to_string(r.dst) +
                                 " has a dangling endpoint");
        }
        if (r.src == r.dst) throw IntegrityError("self-loop on entity " + std::to_string(r.src));
        if (s->second->sentence != d->second->sentence) {
            throw IntegrityError("relation " + std::to_string(r.src) + "->" + std::to_string(r.dst) +
                                 " crosses a sentence boundary");
        }
        if (!signature_ok(r.type, s->second->type, d->second->type)) {
            throw IntegrityError(std::string(relation_type_name(r.type)) + " relation " + std::to_string(r.src) +
                                 "->" + std::to_string(r.dst) + " has the wrong endpoint types");
        }
        if (!seen.insert(r).second) throw IntegrityError("duplicate relation");
    }
}

ReportGraph build_graph(std::string study_id, std::vector<SentenceGraph> parts) {
    ReportGraph g;
    g.study_id = std::move(study_id);
    std::set<Relation> relations;
    for (auto& part : parts) {
        for (auto& e : part.entities) g.entities.push_back(std::move(e));
        relations.insert(part.relations.begin(), part.relations.end());
    }
    std::stable_sort(g.entities.begin(), g.entities.end(),
                     [](const Entity& a, const Entity& b) { return a.tokens.begin < b.tokens.begin; });
    g.relations.assign(relations.begin(), relations.end());
    validate_graph(g);
    return g;
}

std::string graph_to_json(const ReportGraph& g) {
    nlohmann::ordered_json j;
    j["study_id"] = g.study_id;
    j["entities"] = nlohmann::ordered_json::array();
    for (const auto& e : g.entities) {
        nlohmann::ordered_json je;
        je["id"] = e.id;
        je["text"] = e.text;
        je["type"] = entity_type_name(e.type);
        je["sentence"] = e.sentence;
        je["start_token"] = e.tokens.begin;
        je["end_token"] = e.tokens.end;
        je["section"] = e.section;
        j["entities"].push_back(std::move(je));
    }
    j["relations"] = nlohmann::ordered_json::array();
    for (const auto& r : g.relations) {
        nlohmann::ordered_json jr;
        jr["src"] = r.src;
        jr["dst"] = r.dst;
        jr["type"] = relation_type_name(r.type);
        j["relations"].push_back(std::move(jr));
    }
    return j.dump();
}

ReportGraph graph_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("graph JSON: ") + e.what());
    }
    try {
        ReportGraph g;
        g.study_id = j.at("study_id").get<std::string>();
        for (const auto& je : j.at("entities")) {
            Entity e;
            e.id = je.at("id").get<int>();
            e.text = je.at("text").get<std::string>();
            auto type = parse_entity_type(je.at("type").get<std::string>());
            if (!type) throw InputError("graph JSON: unknown entity type");
            e.type = *type;
            e.sentence = je.at("sentence").get<int>();
            e.tokens = {je.at("start_token").get<std::size_t>(), je.at("end_token").get<std::size_t>()};
            if (je.contains("section")) e.section = je.at("section").get<std::string>();
            g.entities.push_back(std::move(e));
        }
        for (const auto& jr : j.at("relations")) {
            auto type = parse_relation_type(jr.at("type").get<std::string>());
            if (!type) throw InputError("graph JSON: unknown relation type");
            g.relations.push_back({jr.at("src").get<int>(), jr.at("dst").get<int>(), *type});
        }
        validate_graph(g);
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("graph JSON: ") + e.what());
    }
}

} // namespace radlabel
