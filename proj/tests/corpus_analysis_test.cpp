#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "radlabel/corpus_analysis.hpp"

using namespace radlabel;

namespace {

using Set = std::set<std::string>;

Set random_set(std::mt19937& rng) {
    Set s;
    std::size_t n = rng() % 7;
    for (std::size_t i = 0; i < n; ++i) s.insert(std::string(1, static_cast<char>('a' + rng() % 10)));
    return s;
}

} // namespace

TEST_CASE("worked overlap example") {
    Set a{"a", "b", "c"};
    Set b{"b", "c", "d", "e"};
    CHECK(set_similarity(a, b) == 0.5);
    CHECK(set_similarity(a, b, SimilarityKind::Jaccard) == doctest::Approx(2.0 / 5.0));
}

TEST_CASE("identity, disjointness and empty sets") {
    Set a{"x", "y"};
    CHECK(set_similarity(a, a) == 1.0);
    CHECK(set_similarity(a, Set{"z"}) == 0.0);
    CHECK(set_similarity(Set{}, Set{}) == 1.0);
    CHECK(set_similarity(a, Set{}) == 0.0);
}

TEST_CASE("similarity properties over random sets") {
    std::mt19937 rng(3);
    for (int iter = 0; iter < 500; ++iter) {
        Set a = random_set(rng), b = random_set(rng);
        for (auto kind : {SimilarityKind::Overlap, SimilarityKind::Jaccard}) {
            double s = set_similarity(a, b, kind);
            CHECK(s == set_similarity(b, a, kind));
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
            CHECK(set_similarity(a, a, kind) == 1.0);
        }
    }
}

TEST_CASE("adding a shared term to equal-size sets does not lower similarity") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 300; ++iter) {
        Set a = random_set(rng), b = random_set(rng);
        if (a.size() != b.size()) continue;
        double before = set_similarity(a, b);
        a.insert("shared");
        b.insert("shared");
        CHECK(set_similarity(a, b) >= before);
    }
}

TEST_CASE("feature sets of simple reports") {
    Pipeline pipeline;
    auto fs = feature_sets(pipeline.analyze({"a", "The left lung shows opacity."}), pipeline.verbs());
    CHECK(fs.verbs.count("shows") == 1);
    CHECK(fs.noun_phrases.count("left lung") == 1);
    auto empty = feature_sets(pipeline.analyze({"b", ""}), pipeline.verbs());
    CHECK(empty.verbs.empty());
    CHECK(empty.entities.empty());
    CHECK(empty.noun_phrases.empty());
}

TEST_CASE("paper example entity features") {
    Pipeline pipeline;
    auto reports = parse_reports_jsonl(fixtures::read("reports.jsonl"));
    auto fs = feature_sets(pipeline.analyze(reports.front()), pipeline.verbs());
    for (const char* e : {"opacity", "infection", "pneumothorax"}) CHECK(fs.entities.count(e) == 1);
}

TEST_CASE("frequency tables") {
    Pipeline pipeline;
    std::vector<AnalyzedReport> none;
    CHECK(frequency_table(none, FrequencyKind::Entity, pipeline.verbs()).rows.empty());

    std::vector<AnalyzedReport> copies;
    for (int i = 0; i < 3; ++i) copies.push_back(pipeline.analyze({"c" + std::to_string(i), "Opacity."}));
    auto t = frequency_table(copies, FrequencyKind::Entity, pipeline.verbs());
    REQUIRE(!t.rows.empty());
    CHECK(t.rows[0] == std::pair<std::string, std::uint64_t>{"opacity", 3});
}

TEST_CASE("fixture frequency tables match the audited goldens and conserve counts") {
    Pipeline pipeline;
    std::vector<AnalyzedReport> reports;
    std::size_t entity_total = 0;
    for (const auto& r : parse_reports_jsonl(fixtures::read("reports.jsonl"))) {
        reports.push_back(pipeline.analyze(r));
        entity_total += reports.back().graph.entities.size();
    }
    auto entities = frequency_table(reports, FrequencyKind::Entity, pipeline.verbs());
    CHECK(frequency_to_csv(entities) == fixtures::read("freq_entity_golden.csv"));
    CHECK(frequency_to_csv(frequency_table(reports, FrequencyKind::Verb, pipeline.verbs())) ==
          fixtures::read("freq_verb_golden.csv"));
    std::uint64_t sum = 0;
    for (const auto& [term, n] : entities.rows) sum += n;
    CHECK(sum == entity_total);
    for (std::size_t i = 1; i < entities.rows.size(); ++i) {
        const auto& p = entities.rows[i - 1];
        const auto& q = entities.rows[i];
        CHECK((p.second > q.second || (p.second == q.second && p.first < q.first)));
    }
}

TEST_CASE("similarity matrix lists each pair once per facet") {
    Pipeline pipeline;
    std::vector<AnalyzedReport> reports;
    for (const auto& r : parse_reports_jsonl(fixtures::read("reports.jsonl"))) reports.push_back(pipeline.analyze(r));
    auto csv = similarity_matrix_csv(reports, pipeline.verbs());
    auto lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 1 + 3 * (20 * 19 / 2));
}
