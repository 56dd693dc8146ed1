#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "radlabel/config.hpp"
#include "radlabel/relations.hpp"
#include "radlabel/tagger.hpp"
#include "radlabel/text.hpp"
#include "radlabel/tokenizer.hpp"

namespace radlabel {

struct ReportInput {
    std::string study_id;
    std::string text;
};

// One {"study_id": str, "text": str} object per non-blank line. Study ids
// must be non-empty; uniqueness is checked by the corpus workflows.
std::vector<ReportInput> parse_reports_jsonl(std::string_view body);

struct AnalyzedReport {
    Report report;
    std::vector<Token> tokens;  // all section bodies, offsets into report.text
    std::vector<Sentence> sentences;
    ReportGraph graph;
};

// Resources resolved from a PipelineConfig. Immutable after construction and
// safe to share between threads.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config = {});

    const PipelineConfig& config() const { return config_; }
    const Lexicon& lexicon() const { return lexicon_; }
    const AbbreviationList& abbreviations() const { return abbreviations_; }
    const text::WordSet& verbs() const { return verbs_; }

    // sectionize -> tokenize -> split_sentences -> tag_entities -> extract_relations -> build_graph
    AnalyzedReport analyze(const ReportInput& input) const;

private:
    PipelineConfig config_;
    Lexicon lexicon_;
    AbbreviationList abbreviations_;
    text::WordSet verbs_;
};

} // namespace radlabel
