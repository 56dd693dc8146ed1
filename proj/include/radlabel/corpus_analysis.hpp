#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radlabel/pipeline.hpp"

namespace radlabel {

// All entries case-folded.
struct FeatureSets {
    std::set<std::string> noun_phrases;
    std::set<std::string> verbs;
    std::set<std::string> entities;

    bool operator==(const FeatureSets&) const = default;
};

enum class Facet { NounPhrases, Verbs, Entities };

const char* facet_name(Facet f);

// entities: entity surface forms. verbs: tokens found in `verb_list`.
// noun_phrases: maximal runs of glued entities shaped MOD* ANAT or MOD* OBS.
FeatureSets feature_sets(const AnalyzedReport& report, const text::WordSet& verb_list);

enum class SimilarityKind {
    Overlap,  // |A n B| / max(|A|, |B|)
    Jaccard,  // |A n B| / |A u B|
};

// Two empty sets score 1.0.
double set_similarity(const std::set<std::string>& a, const std::set<std::string>& b,
                      SimilarityKind kind = SimilarityKind::Overlap);

double similarity(const FeatureSets& a, const FeatureSets& b, Facet facet,
                  SimilarityKind kind = SimilarityKind::Overlap);

enum class FrequencyKind { Verb, Entity };

struct FrequencyTable {
    FrequencyKind kind = FrequencyKind::Entity;
    std::vector<std::pair<std::string, std::uint64_t>> rows;  // count desc, then term asc
};

FrequencyTable frequency_table(std::span<const AnalyzedReport> reports, FrequencyKind kind,
                               const text::WordSet& verb_list);

// "term,count"
std::string frequency_to_csv(const FrequencyTable& table);

// "study_a,study_b,facet,score" for every unordered pair in input order.
std::string similarity_matrix_csv(std::span<const AnalyzedReport> reports, const text::WordSet& verb_list,
                                  SimilarityKind kind = SimilarityKind::Overlap);

} // namespace radlabel
