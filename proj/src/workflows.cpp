#include "radlabel/workflows.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "json.hpp"
#include "radlabel/csv.hpp"
#include "radlabel/errors.hpp"
#include "radlabel/labeler.hpp"
#include "radlabel/metrics.hpp"
#include "radlabel/numerics.hpp"
#include "radlabel/text.hpp"

namespace radlabel::workflows {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<AnalyzedReport> analyze_all(const Pipeline& pipeline, std::string_view reports_jsonl) {
    auto inputs = parse_reports_jsonl(reports_jsonl);
    std::set<std::string> seen;
    std::vector<AnalyzedReport> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) {
        if (!seen.insert(in.study_id).second) throw InputError("duplicate study_id '" + in.study_id + "'");
        out.push_back(pipeline.analyze(in));
    }
    return out;
}

// JSON numbers at the shared 12-significant-digit precision.
double rounded(double v) { return std::strtod(text::format_number(v).c_str(), nullptr); }

double parse_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
        throw InputError(where + "bad number '" + s + "'");
    }
    return v;
}

} // namespace

std::string tokenize_reports(const Pipeline& pipeline, std::string_view reports_jsonl) {
    std::string out;
    for (const auto& r : analyze_all(pipeline, reports_jsonl)) {
        ordered_json line;
        line["study_id"] = r.report.study_id;
        auto tokens = ordered_json::array();
        for (const auto& t : r.tokens) tokens.push_back({t.text, t.start, t.end, token_kind_name(t.kind)});
        line["tokens"] = std::move(tokens);
        auto sentences = ordered_json::array();
        for (const auto& s : r.sentences) {
            ordered_json js;
            js["section"] = s.section;
            js["begin"] = s.tokens.begin;
            js["end"] = s.tokens.end;
            sentences.push_back(std::move(js));
        }
        line["sentences"] = std::move(sentences);
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::string parse_reports(const Pipeline& pipeline, std::string_view reports_jsonl) {
    std::string out;
    for (const auto& r : analyze_all(pipeline, reports_jsonl)) {
        out += graph_to_json(r.graph);
        out += '\n';
    }
    return out;
}

std::string label_reports(const Pipeline& pipeline, std::string_view reports_jsonl) {
    auto inputs = parse_reports_jsonl(reports_jsonl);
    LabelOptions opts{pipeline.config().drop_uncertain, pipeline.config().jobs};
    return labels_to_csv(label_corpus(inputs, pipeline, opts));
}

std::string similarity_reports(const Pipeline& pipeline, std::string_view reports_jsonl, SimilarityKind kind) {
    auto reports = analyze_all(pipeline, reports_jsonl);
    return similarity_matrix_csv(reports, pipeline.verbs(), kind);
}

std::string frequency_reports(const Pipeline& pipeline, std::string_view reports_jsonl, FrequencyKind kind) {
    auto reports = analyze_all(pipeline, reports_jsonl);
    return frequency_to_csv(frequency_table(reports, kind, pipeline.verbs()));
}

std::string evaluate_metrics(std::string_view predictions_csv, double threshold, MetricFormat format) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw InputError("threshold must lie in [0, 1]");
    auto preds = parse_predictions_csv(predictions_csv);
    auto report = evaluate_predictions(preds, threshold);
    return format == MetricFormat::Json ? metric_report_json(report) : metric_report_table(report);
}

std::string prevalence_report(std::string_view labels_csv) {
    return prevalence_to_csv(prevalence(labels_from_csv(labels_csv)));
}

std::string rebalance_labels(std::string_view labels_csv, std::string_view plan_json,
                             std::optional<std::uint64_t> seed) {
    auto labels = labels_from_csv(labels_csv);
    auto plan = parse_plan_json(plan_json);
    if (seed) plan.seed = *seed;
    return labels_to_csv(downsample(labels, plan));
}

TrainOutput train_head(std::string_view features_csv, std::string_view labels_csv, std::string_view split_csv,
                       const TrainOptions& options) {
    auto feature_rows = csv::parse(features_csv);
    if (feature_rows.empty() || feature_rows[0].empty() || feature_rows[0][0] != "study_id") {
        throw InputError("features CSV: header must start with study_id");
    }
    const auto& header = feature_rows[0];
    const std::size_t d = header.size() - 1;
    if (d == 0) throw InputError("features CSV: no feature columns");

    std::map<std::string, LabelVector> labels;
    for (auto& v : labels_from_csv(labels_csv)) {
        auto id = v.study_id;
        if (!labels.emplace(id, std::move(v)).second) throw InputError("labels CSV: duplicate study_id '" + id + "'");
    }

    std::map<std::string, bool> is_train;
    auto split_rows = csv::parse(split_csv);
    if (split_rows.empty() || csv::join_row(split_rows[0]) != "study_id,split") {
        throw InputError("split CSV: header must be 'study_id,split'");
    }
    for (std::size_t r = 1; r < split_rows.size(); ++r) {
        const auto& row = split_rows[r];
        auto where = "split CSV row " + std::to_string(r + 1) + ": ";
        if (row.size() != 2) throw InputError(where + "expected 2 fields");
        if (row[1] != "train" && row[1] != "val") throw InputError(where + "split must be train or val");
        if (!is_train.emplace(row[0], row[1] == "train").second) throw InputError(where + "duplicate study_id");
    }

    Dataset train{d, kConditionCount, {}, {}};
    Dataset val{d, kConditionCount, {}, {}};
    std::vector<LabelVector> train_labels;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < feature_rows.size(); ++r) {
        const auto& row = feature_rows[r];
        auto where = "features CSV row " + std::to_string(r + 1) + ": ";
        if (row.size() != header.size()) throw InputError(where + "expected " + std::to_string(header.size()) + " fields");
        if (!seen.insert(row[0]).second) throw InputError(where + "duplicate study_id");
        auto lab = labels.find(row[0]);
        if (lab == labels.end()) throw InputError(where + "no labels for '" + row[0] + "'");
        auto split = is_train.find(row[0]);
        if (split == is_train.end()) throw InputError(where + "'" + row[0] + "' is not in the split file");
        Dataset& target = split->second ? train : val;
        for (std::size_t k = 1; k < row.size(); ++k) target.x.push_back(parse_double(row[k], where));
        for (auto bit : encode_binary(lab->second)) target.y.push_back(bit);
        if (split->second) train_labels.push_back(lab->second);
    }

    TrainConfig cfg;
    cfg.learning_rate = options.learning_rate;
    cfg.max_epochs = options.max_epochs;
    cfg.patience = options.patience;
    cfg.seed = options.seed;
    auto class_w = class_weights(prevalence(train_labels), options.weights);
    cfg.weights.assign(class_w.begin(), class_w.end());
    auto result = radlabel::train_head(train, val, cfg);

    ordered_json j;
    auto names = ordered_json::array();
    for (auto c : kAllConditions) names.push_back(condition_name(c));
    j["labels"] = std::move(names);
    j["features"] = std::vector<std::string>(header.begin() + 1, header.end());
    j["best_epoch"] = result.best_epoch;
    j["epochs_run"] = result.history.size();
    auto cw = ordered_json::array();
    for (double w : cfg.weights) cw.push_back(rounded(w));
    j["class_weights"] = std::move(cw);
    auto weights = ordered_json::array();
    for (std::size_t r = 0; r < result.params.labels; ++r) {
        auto row = ordered_json::array();
        for (std::size_t k = 0; k < result.params.features; ++k) row.push_back(rounded(result.params.w(r, k)));
        weights.push_back(std::move(row));
    }
    j["weights"] = std::move(weights);
    auto bias = ordered_json::array();
    for (double b : result.params.bias) bias.push_back(rounded(b));
    j["bias"] = std::move(bias);

    TrainOutput out;
    out.params_json = j.dump(2) + "\n";
    out.history_csv = "epoch,train_loss,val_loss\n";
    for (const auto& e : result.history) {
        out.history_csv += std::to_string(e.epoch) + "," + text::format_number(e.train_loss) + "," +
                           text::format_number(e.val_loss) + "\n";
    }
    return out;
}

std::string gradcam(std::string_view maps_tensor, std::string_view grads_tensor, std::size_t out_h,
                    std::size_t out_w, Resample mode) {
    auto maps = parse_tensor(maps_tensor, "maps");
    auto grads = parse_tensor(grads_tensor, "grads");
    return heatmap_to_pgm(gradcam_heatmap(maps, grads, out_h, out_w, mode));
}

std::string preprocess_image(std::string_view pgm_bytes, std::size_t out_h, std::size_t out_w) {
    return format_tensor(grid_to_tensor(radlabel::preprocess_image(parse_pgm(pgm_bytes), out_h, out_w)));
}

} // namespace radlabel::workflows
