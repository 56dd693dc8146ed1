#include "doctest.h"

#include <array>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "radlabel/errors.hpp"
#include "radlabel/labeler.hpp"

using namespace radlabel;

namespace {

LabelVector label_text(const std::string& text) {
    static const Pipeline pipeline;
    return label_graph(pipeline.analyze({"t", text}).graph, LabelRules{});
}

std::vector<ReportInput> corpus() { return parse_reports_jsonl(fixtures::read("reports.jsonl")); }

} // namespace

TEST_CASE("paper example labels") {
    Pipeline pipeline;
    auto g = pipeline.analyze(corpus().front()).graph;
    LabelRules rules;
    CHECK(assign_label(g, Condition::Pneumothorax, rules).status == LabelStatus::Absent);
    CHECK(assign_label(g, Condition::Pneumonia, rules).status == LabelStatus::Uncertain);
    CHECK(assign_label(g, Condition::PleuralEffusion, rules).status == LabelStatus::Unmentioned);
    CHECK(label_graph(g, rules).status(Condition::NoFinding) == LabelStatus::Absent);
    CHECK_THROWS_AS(assign_label(g, Condition::NoFinding, rules), ContractError);
}

TEST_CASE("history-only mentions do not count") {
    auto v = label_text("History: pneumothorax.\nImpression: Lungs are clear.");
    CHECK(v.status(Condition::Pneumothorax) == LabelStatus::Unmentioned);
    CHECK(v.status(Condition::NoFinding) == LabelStatus::Present);
}

TEST_CASE("scored sections are configurable") {
    static const Pipeline pipeline;
    auto g = pipeline.analyze({"t", "History: pneumothorax."}).graph;
    LabelRules rules;
    rules.scored_sections = {"History"};
    CHECK(assign_label(g, Condition::Pneumothorax, rules).status == LabelStatus::Present);
}

TEST_CASE("hedge qualifier makes a mention uncertain") {
    CHECK(label_text("Possible small pneumothorax.").status(Condition::Pneumothorax) == LabelStatus::Uncertain);
    CHECK(label_text("Cannot exclude pneumonia.").status(Condition::Pneumonia) == LabelStatus::Uncertain);
}

TEST_CASE("present outranks uncertain and absent across mentions") {
    auto v = label_text("Findings: No pneumothorax.\nImpression: Small pneumothorax.");
    CHECK(v.status(Condition::Pneumothorax) == LabelStatus::Present);
}

TEST_CASE("adding a present mention never lowers the status") {
    for (const auto& r : corpus()) {
        auto before = label_text(r.text);
        auto after = label_text(r.text + "\nImpression: Large pneumothorax.");
        CHECK(after.status(Condition::Pneumothorax) >= before.status(Condition::Pneumothorax));
        CHECK(after.status(Condition::Pneumothorax) == LabelStatus::Present);
    }
}

TEST_CASE("no finding derivation") {
    using S = LabelStatus;
    auto nf = [](S a, S b, S c) {
        std::array<ConditionLabel, 3> d{{{Condition::Pneumonia, a}, {Condition::Pneumothorax, b}, {Condition::PleuralEffusion, c}}};
        return derive_no_finding(d).status;
    };
    CHECK(nf(S::Absent, S::Absent, S::Absent) == S::Present);
    CHECK(nf(S::Uncertain, S::Unmentioned, S::Unmentioned) == S::Absent);
    CHECK(nf(S::Unmentioned, S::Present, S::Unmentioned) == S::Absent);
    CHECK(nf(S::Unmentioned, S::Unmentioned, S::Unmentioned) == S::Present);
}

TEST_CASE("binary encoding") {
    LabelVector nf;
    nf.set(Condition::NoFinding, LabelStatus::Present);
    CHECK(encode_binary(nf) == std::array<std::uint8_t, 4>{1, 0, 0, 0});
    LabelVector eff;
    eff.set(Condition::NoFinding, LabelStatus::Absent);
    eff.set(Condition::PleuralEffusion, LabelStatus::Present);
    CHECK(encode_binary(eff) == std::array<std::uint8_t, 4>{0, 0, 0, 1});
    LabelVector none;
    none.set(Condition::NoFinding, LabelStatus::Absent);
    none.set(Condition::Pneumonia, LabelStatus::Uncertain);
    CHECK(encode_binary(none) == std::array<std::uint8_t, 4>{0, 0, 0, 0});
}

TEST_CASE("fixture corpus matches the golden CSV for any worker count") {
    Pipeline pipeline;
    auto golden = fixtures::read("labels_golden.csv");
    auto reports = corpus();
    for (unsigned jobs : {1u, 2u, 3u, 8u}) {
        auto rows = label_corpus(reports, pipeline, {false, jobs});
        CHECK(labels_to_csv(rows) == golden);
    }
}

TEST_CASE("encoded rows never combine no finding with a disease") {
    Pipeline pipeline;
    for (const auto& v : label_corpus(corpus(), pipeline, {})) {
        auto bits = encode_binary(v);
        CHECK((bits[0] == 0 || (bits[1] == 0 && bits[2] == 0 && bits[3] == 0)));
        CHECK(v.status(Condition::NoFinding) != LabelStatus::Uncertain);
    }
}

TEST_CASE("drop-uncertain removes rows with any uncertain label") {
    Pipeline pipeline;
    auto all = label_corpus(corpus(), pipeline, {});
    auto kept = label_corpus(corpus(), pipeline, {true, 1});
    std::size_t uncertain = 0;
    for (const auto& v : all) {
        bool any = false;
        for (auto c : kAllConditions) any = any || v.status(c) == LabelStatus::Uncertain;
        uncertain += any;
    }
    CHECK(kept.size() == all.size() - uncertain);
    for (const auto& v : kept)
        for (auto c : kAllConditions) CHECK(v.status(c) != LabelStatus::Uncertain);
}

TEST_CASE("corpus edge cases") {
    Pipeline pipeline;
    CHECK(label_corpus(std::vector<ReportInput>{}, pipeline, {}).empty());
    std::vector<ReportInput> dup{{"a", "x"}, {"a", "y"}};
    CHECK_THROWS_AS(label_corpus(dup, pipeline, {}), InputError);
}

TEST_CASE("labels CSV round trip and validation") {
    auto golden = fixtures::read("labels_golden.csv");
    CHECK(labels_to_csv(labels_from_csv(golden)) == golden);
    CHECK_THROWS_AS(labels_from_csv("study_id,No Finding,Pneumonia,Pneumothorax,Pleural Effusion\na,0,,,\n"), InputError);
    CHECK_THROWS_AS(labels_from_csv("id,a\n"), InputError);
    CHECK_THROWS_AS(labels_from_csv("study_id,No Finding,Pneumonia,Pneumothorax,Pleural Effusion\na,1,2,,\n"), InputError);
}

TEST_CASE("labeling is a pure function of the graph") {
    Pipeline pipeline;
    for (const auto& r : corpus()) {
        auto g = pipeline.analyze(r).graph;
        CHECK(label_graph(g, {}) == label_graph(g, {}));
    }
}
