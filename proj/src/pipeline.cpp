#include "radlabel/pipeline.hpp"

#include "embedded_data.hpp"
#include "json.hpp"
#include "radlabel/errors.hpp"

namespace radlabel {

std::vector<ReportInput> parse_reports_jsonl(std::string_view body) {
    std::vector<ReportInput> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto nl = body.find('\n', pos);
        auto line = body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? body.size() : nl + 1;
        ++line_no;
        if (text::trim(line).empty()) continue;

        auto where = "reports line " + std::to_string(line_no) + ": ";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(where + e.what());
        }
        if (!j.is_object() || !j.contains("study_id") || !j.contains("text") || !j["study_id"].is_string() ||
            !j["text"].is_string()) {
            throw InputError(where + "expected string fields study_id and text");
        }
        ReportInput r{j["study_id"].get<std::string>(), j["text"].get<std::string>()};
        if (r.study_id.empty()) throw InputError(where + "empty study_id");
        out.push_back(std::move(r));
    }
    return out;
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)),
      lexicon_(config_.lexicon.empty() ? Lexicon::builtin() : Lexicon::load(config_.lexicon)),
      abbreviations_(config_.abbreviations.empty() ? AbbreviationList::builtin()
                                                   : AbbreviationList::load(config_.abbreviations)),
      verbs_(text::WordSet::parse(config_.verbs.empty() ? std::string(embedded::verbs)
                                                        : text::read_file(config_.verbs))) {
    if (config_.decoder != "lexicon" && config_.decoder != "viterbi") {
        throw InputError("unknown decoder '" + config_.decoder + "'");
    }
}

AnalyzedReport Pipeline::analyze(const ReportInput& input) const {
    AnalyzedReport out;
    out.report = sectionize(input.study_id, input.text, config_.headers);

    for (const auto& section : out.report.sections) {
        auto toks = tokenize(section.text, section.offset);
        auto base = out.tokens.size();
        auto sents = split_sentences(toks, abbreviations_, section.name, base);
        out.tokens.insert(out.tokens.end(), toks.begin(), toks.end());
        out.sentences.insert(out.sentences.end(), sents.begin(), sents.end());
    }

    const bool decode = config_.decoder == "viterbi";
    const ScoreTable zero_baseline;
    std::vector<SentenceGraph> parts;
    int next_id = 0;
    for (std::size_t s = 0; s < out.sentences.size(); ++s) {
        const auto& sentence = out.sentences[s];
        auto span = std::span<const Token>(out.tokens).subspan(sentence.tokens.begin, sentence.tokens.size());
        SentenceGraph part;
        part.entities = tag_entities(span, lexicon_, decode ? &zero_baseline : nullptr, config_.emission_boost);
        for (auto& e : part.entities) {
            e.id = next_id++;
            e.tokens.begin += sentence.tokens.begin;
            e.tokens.end += sentence.tokens.begin;
            e.sentence = static_cast<int>(s);
            e.section = sentence.section;
        }
        part.relations = extract_relations(part.entities, out.tokens, sentence, lexicon_);
        parts.push_back(std::move(part));
    }
    out.graph = build_graph(input.study_id, std::move(parts));
    return out;
}

} // namespace radlabel
