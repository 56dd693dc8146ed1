#include "radlabel/labeler.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <unordered_set>

#include "radlabel/csv.hpp"
#include "radlabel/errors.hpp"
#include "radlabel/text.hpp"

namespace radlabel {

std::string_view status_code(LabelStatus s) {
    switch (s) {
    case LabelStatus::Present: return "1";
    case LabelStatus::Absent: return "-1";
    case LabelStatus::Uncertain: return "0";
    case LabelStatus::Unmentioned: return "";
    }
    return "";
}

std::optional<LabelStatus> parse_status_code(std::string_view code) {
    if (code == "1") return LabelStatus::Present;
    if (code == "-1") return LabelStatus::Absent;
    if (code == "0") return LabelStatus::Uncertain;
    if (code.empty()) return LabelStatus::Unmentioned;
    return std::nullopt;
}

namespace {

bool scored(const std::string& section, const std::vector<std::string>& sections) {
    auto folded = text::fold_case(section);
    return std::any_of(sections.begin(), sections.end(),
                       [&](const std::string& s) { return text::fold_case(s) == folded; });
}

LabelStatus mention_status(const ReportGraph& g, const Entity& e, const Lexicon& lexicon) {
    for (const auto& r : g.relations) {
        if (r.type == RelationType::Negation && r.dst == e.id) return LabelStatus::Absent;
    }
    for (const auto& r : g.relations) {
        if (r.type == RelationType::SuggestiveOf && (r.src == e.id || r.dst == e.id)) return LabelStatus::Uncertain;
        if (r.type == RelationType::Modify && r.dst == e.id) {
            const auto* mod = g.entity(r.src);
            const auto* entry = mod ? lexicon.find_text(mod->text) : nullptr;
            if (entry && entry->hedge) return LabelStatus::Uncertain;
        }
    }
    return LabelStatus::Present;
}

} // namespace

ConditionLabel assign_label(const ReportGraph& g, Condition condition, const LabelRules& rules) {
    if (condition == Condition::NoFinding) throw ContractError("No Finding is derived; use derive_no_finding");
    if (rules.lexicon == nullptr) throw ContractError("label rules need a lexicon");
    ConditionLabel out{condition, LabelStatus::Unmentioned};
    for (const auto& e : g.entities) {
        if (e.type != EntityType::Obs || !scored(e.section, rules.scored_sections)) continue;
        const auto* entry = rules.lexicon->find_text(e.text);
        if (!entry || entry->condition != condition) continue;
        out.status = std::max(out.status, mention_status(g, e, *rules.lexicon));
    }
    return out;
}

ConditionLabel derive_no_finding(std::span<const ConditionLabel> disease_labels) {
    bool clear = std::all_of(disease_labels.begin(), disease_labels.end(), [](const ConditionLabel& l) {
        return l.status == LabelStatus::Absent || l.status == LabelStatus::Unmentioned;
    });
    return {Condition::NoFinding, clear ? LabelStatus::Present : LabelStatus::Absent};
}

LabelVector label_graph(const ReportGraph& g, const LabelRules& rules) {
    LabelVector v;
    v.study_id = g.study_id;
    std::array<ConditionLabel, kDiseaseConditions.size()> diseases;
    for (std::size_t k = 0; k < kDiseaseConditions.size(); ++k) {
        diseases[k] = assign_label(g, kDiseaseConditions[k], rules);
        v.set(diseases[k].condition, diseases[k].status);
    }
    v.set(Condition::NoFinding, derive_no_finding(diseases).status);
    return v;
}

std::vector<LabelVector> label_corpus(std::span<const ReportInput> reports, const Pipeline& pipeline,
                                      const LabelOptions& options) {
    std::unordered_set<std::string> ids;
    for (const auto& r : reports) {
        if (!ids.insert(r.study_id).second) throw InputError("duplicate study_id '" + r.study_id + "'");
    }

    LabelRules rules{&pipeline.lexicon(), pipeline.config().scored_sections};
    std::vector<LabelVector> out(reports.size());
    std::vector<std::exception_ptr> errors(reports.size());
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < reports.size(); i += stride) {
            try {
                out[i] = label_graph(pipeline.analyze(reports[i]).graph, rules);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(reports.size())));
    if (jobs <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned k = 0; k < jobs; ++k) workers.emplace_back(work, k, jobs);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    if (options.drop_uncertain) {
        std::erase_if(out, [](const LabelVector& v) {
            return std::any_of(v.labels.begin(), v.labels.end(),
                               [](const ConditionLabel& l) { return l.status == LabelStatus::Uncertain; });
        });
    }
    return out;
}

std::array<std::uint8_t, kConditionCount> encode_binary(const LabelVector& v) {
    std::array<std::uint8_t, kConditionCount> bits{};
    for (auto c : kAllConditions) bits[index_of(c)] = v.status(c) == LabelStatus::Present ? 1 : 0;
    return bits;
}

std::string labels_to_csv(std::span<const LabelVector> rows) {
    std::string out(kLabelsCsvHeader);
    out += '\n';
    for (const auto& v : rows) {
        out += csv::escape(v.study_id);
        for (auto c : kAllConditions) {
            out += ',';
            out += status_code(v.status(c));
        }
        out += '\n';
    }
    return out;
}

std::vector<LabelVector> labels_from_csv(std::string_view body) {
    auto rows = csv::parse(body);
    if (rows.empty()) throw InputError("labels CSV: missing header");
    if (csv::join_row(rows[0]) != kLabelsCsvHeader) {
        throw InputError("labels CSV: header must be '" + std::string(kLabelsCsvHeader) + "'");
    }
    std::vector<LabelVector> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto where = "labels CSV row " + std::to_string(r + 1) + ": ";
        if (row.size() != 1 + kConditionCount) throw InputError(where + "expected 5 fields");
        if (row[0].empty()) throw InputError(where + "empty study_id");
        LabelVector v;
        v.study_id = row[0];
        for (auto c : kAllConditions) {
            auto s = parse_status_code(row[1 + index_of(c)]);
            if (!s) throw InputError(where + "bad status '" + row[1 + index_of(c)] + "'");
            if (c == Condition::NoFinding && *s == LabelStatus::Uncertain) {
                throw InputError(where + "No Finding cannot be uncertain");
            }
            v.set(c, *s);
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace radlabel
