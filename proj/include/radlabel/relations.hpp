#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radlabel/tagger.hpp"

namespace radlabel {

// Enumerator order is the canonical relation sort key.
enum class RelationType { LocatedAt, SuggestiveOf, Modify, Negation };

const char* relation_type_name(RelationType t);
std::optional<RelationType> parse_relation_type(std::string_view s);

struct Relation {
    int src = 0;
    int dst = 0;
    RelationType type = RelationType::Modify;

    bool operator==(const Relation&) const = default;
    auto operator<=>(const Relation&) const = default;
};

struct ReportGraph {
    std::string study_id;
    std::vector<Entity> entities;
    std::vector<Relation> relations;

    const Entity* entity(int id) const;
    bool operator==(const ReportGraph&) const = default;
};

// Rule-based relations for the entities of one sentence (report-wide token
// ranges, ordered). Rules, applied in order:
//   MODIFY         MOD -> nearest following OBS (locative MODs: nearest following ANAT), falling back to the other
//   LOCATED_AT     OBS -> nearest ANAT in the same clause, preceding wins ties
//   SUGGESTIVE_OF  OBS -> OBS across a hedge connector or hedge qualifier
//   NEGATION       NEG -> nearest following OBS
std::vector<Relation> extract_relations(std::span<const Entity> entities, std::span<const Token> tokens,
                                        const Sentence& sentence, const Lexicon& lexicon);

struct SentenceGraph {
    std::vector<Entity> entities;
    std::vector<Relation> relations;
};

// Concatenates per-sentence results, drops duplicate relations and orders
// entities by first token and relations by (src, dst, type).
// Throws IntegrityError when an invariant fails.
ReportGraph build_graph(std::string study_id, std::vector<SentenceGraph> parts);

// Throws IntegrityError when the graph is not a simple, well-typed graph.
void validate_graph(const ReportGraph& graph);

// Compact JSON with fixed key order; the output of build_graph round-trips exactly.
std::string graph_to_json(const ReportGraph& graph);
ReportGraph graph_from_json(std::string_view json);

} // namespace radlabel
