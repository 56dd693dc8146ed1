#include "radlabel/corpus_analysis.hpp"

#include <algorithm>
#include <map>

#include "radlabel/csv.hpp"

namespace radlabel {

const char* facet_name(Facet f) {
    switch (f) {
    case Facet::NounPhrases: return "noun_phrases";
    case Facet::Verbs: return "verbs";
    case Facet::Entities: return "entities";
    }
    return "entities";
}

FeatureSets feature_sets(const AnalyzedReport& report, const text::WordSet& verb_list) {
    FeatureSets out;
    for (const auto& t : report.tokens) {
        if (verb_list.contains(t.text)) out.verbs.insert(text::fold_case(t.text));
    }
    const auto& entities = report.graph.entities;
    for (const auto& e : entities) out.entities.insert(text::fold_case(e.text));

    std::vector<const Entity*> run;
    for (const auto& e : entities) {
        bool glued = !run.empty() && run.back()->sentence == e.sentence && run.back()->tokens.end == e.tokens.begin;
        if (!glued) run.clear();
        if (e.type == EntityType::Mod) {
            run.push_back(&e);
        } else if (e.type == EntityType::Anat || e.type == EntityType::Obs) {
            std::string phrase;
            for (const auto* m : run) phrase += text::fold_case(m->text) + " ";
            phrase += text::fold_case(e.text);
            out.noun_phrases.insert(std::move(phrase));
            run.clear();
        } else {
            run.clear();
        }
    }
    return out;
}

double set_similarity(const std::set<std::string>& a, const std::set<std::string>& b, SimilarityKind kind) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t shared = 0;
    for (const auto& x : a) shared += b.count(x);
    double denom = kind == SimilarityKind::Overlap ? static_cast<double>(std::max(a.size(), b.size()))
                                                   : static_cast<double>(a.size() + b.size() - shared);
    return static_cast<double>(shared) / denom;
}

double similarity(const FeatureSets& a, const FeatureSets& b, Facet facet, SimilarityKind kind) {
    switch (facet) {
    case Facet::NounPhrases: return set_similarity(a.noun_phrases, b.noun_phrases, kind);
    case Facet::Verbs: return set_similarity(a.verbs, b.verbs, kind);
    case Facet::Entities: return set_similarity(a.entities, b.entities, kind);
    }
    return 0.0;
}

FrequencyTable frequency_table(std::span<const AnalyzedReport> reports, FrequencyKind kind,
                               const text::WordSet& verb_list) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& r : reports) {
        if (kind == FrequencyKind::Verb) {
            for (const auto& t : r.tokens) {
                if (verb_list.contains(t.text)) ++counts[text::fold_case(t.text)];
            }
        } else {
            for (const auto& e : r.graph.entities) ++counts[text::fold_case(e.text)];
        }
    }
    FrequencyTable table;
    table.kind = kind;
    table.rows.assign(counts.begin(), counts.end());
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
    return table;
}

std::string frequency_to_csv(const FrequencyTable& table) {
    std::string out = "term,count\n";
    for (const auto& [term, count] : table.rows) out += csv::escape(term) + "," + std::to_string(count) + "\n";
    return out;
}

std::string similarity_matrix_csv(std::span<const AnalyzedReport> reports, const text::WordSet& verb_list,
                                  SimilarityKind kind) {
    std::vector<FeatureSets> features;
    features.reserve(reports.size());
    for (const auto& r : reports) features.push_back(feature_sets(r, verb_list));

    std::string out = "study_a,study_b,facet,score\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (std::size_t j = i + 1; j < reports.size(); ++j) {
            for (auto facet : {Facet::NounPhrases, Facet::Verbs, Facet::Entities}) {
                out += csv::escape(reports[i].report.study_id) + "," + csv::escape(reports[j].report.study_id) +
                       "," + facet_name(facet) + "," +
                       text::format_number(similarity(features[i], features[j], facet, kind)) + "\n";
            }
        }
    }
    return out;
}

} // namespace radlabel
