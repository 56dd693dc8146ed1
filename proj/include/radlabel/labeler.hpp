#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radlabel/condition.hpp"
#include "radlabel/pipeline.hpp"
#include "radlabel/relations.hpp"

namespace radlabel {

// Consolidation precedence: Present > Uncertain > Absent > Unmentioned.
enum class LabelStatus { Unmentioned = 0, Absent = 1, Uncertain = 2, Present = 3 };

// "1", "-1", "0" or "" (unmentioned).
std::string_view status_code(LabelStatus s);
std::optional<LabelStatus> parse_status_code(std::string_view code);

struct ConditionLabel {
    Condition condition = Condition::NoFinding;
    LabelStatus status = LabelStatus::Unmentioned;

    bool operator==(const ConditionLabel&) const = default;
};

struct LabelVector {
    std::string study_id;
    std::array<ConditionLabel, kConditionCount> labels{{{Condition::NoFinding, LabelStatus::Unmentioned},
                                                        {Condition::Pneumonia, LabelStatus::Unmentioned},
                                                        {Condition::Pneumothorax, LabelStatus::Unmentioned},
                                                        {Condition::PleuralEffusion, LabelStatus::Unmentioned}}};

    LabelStatus status(Condition c) const { return labels[index_of(c)].status; }
    void set(Condition c, LabelStatus s) { labels[index_of(c)] = {c, s}; }
    bool operator==(const LabelVector&) const = default;
};

struct LabelRules {
    const Lexicon* lexicon = &Lexicon::builtin();
    std::vector<std::string> scored_sections{"Impression", "Findings", "preamble"};
};

// Status of one disease from the OBS mentions in scored sections. Per mention:
// a NEGATION edge makes it Absent; a SUGGESTIVE_OF edge either way or a hedge
// qualifier attached by MODIFY makes it Uncertain; otherwise Present.
// Throws ContractError for NoFinding, which is derived.
ConditionLabel assign_label(const ReportGraph& graph, Condition condition, const LabelRules& rules);

// Present iff every disease label is Absent or Unmentioned.
ConditionLabel derive_no_finding(std::span<const ConditionLabel> disease_labels);

LabelVector label_graph(const ReportGraph& graph, const LabelRules& rules);

struct LabelOptions {
    bool drop_uncertain = false;
    unsigned jobs = 1;
};

// Output order follows input order for any number of jobs. Throws InputError
// on duplicate study ids.
std::vector<LabelVector> label_corpus(std::span<const ReportInput> reports, const Pipeline& pipeline,
                                      const LabelOptions& options);

// Bits (NO_FINDING, PNEUMONIA, PNEUMOTHORAX, EFFUSION); a bit is set iff Present.
std::array<std::uint8_t, kConditionCount> encode_binary(const LabelVector& v);

inline constexpr std::string_view kLabelsCsvHeader = "study_id,No Finding,Pneumonia,Pneumothorax,Pleural Effusion";

std::string labels_to_csv(std::span<const LabelVector> rows);
std::vector<LabelVector> labels_from_csv(std::string_view csv);

} // namespace radlabel
