#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "radlabel/corpus_analysis.hpp"
#include "radlabel/gradcam.hpp"
#include "radlabel/pipeline.hpp"
#include "radlabel/rebalance.hpp"

// One function per command-line subcommand: text in, text out. The C API
// wraps these and the CLI only moves bytes between files and these calls.
namespace radlabel::workflows {

// JSONL, one object per report: tokens as [text, start, end, kind] and
// sentences as {section, begin, end} token ranges.
std::string tokenize_reports(const Pipeline& pipeline, std::string_view reports_jsonl);

// JSONL, one graph per report.
std::string parse_reports(const Pipeline& pipeline, std::string_view reports_jsonl);

// Labels CSV; honours config().drop_uncertain and config().jobs.
std::string label_reports(const Pipeline& pipeline, std::string_view reports_jsonl);

std::string similarity_reports(const Pipeline& pipeline, std::string_view reports_jsonl, SimilarityKind kind);

std::string frequency_reports(const Pipeline& pipeline, std::string_view reports_jsonl, FrequencyKind kind);

enum class MetricFormat { Json, Table };

std::string evaluate_metrics(std::string_view predictions_csv, double threshold, MetricFormat format);

std::string prevalence_report(std::string_view labels_csv);

// A given seed replaces the one in the plan.
std::string rebalance_labels(std::string_view labels_csv, std::string_view plan_json,
                             std::optional<std::uint64_t> seed);

struct TrainOptions {
    double learning_rate = 0.1;
    std::size_t max_epochs = 100;
    std::size_t patience = 5;
    std::uint64_t seed = 0;
    WeightScheme weights = WeightScheme::InverseFrequency;
};

struct TrainOutput {
    std::string params_json;
    std::string history_csv;  // "epoch,train_loss,val_loss"
};

// features: "study_id,<feature names...>"; labels: labels CSV (Present -> 1);
// split: "study_id,split" with split in {train, val}. Every feature row needs
// a label row and a split row. Class weights come from the training split.
TrainOutput train_head(std::string_view features_csv, std::string_view labels_csv, std::string_view split_csv,
                       const TrainOptions& options);

// Heatmap as PGM text.
std::string gradcam(std::string_view maps_tensor, std::string_view grads_tensor, std::size_t out_h,
                    std::size_t out_w, Resample mode);

// PGM bytes in, single-channel tensor text out.
std::string preprocess_image(std::string_view pgm_bytes, std::size_t out_h, std::size_t out_w);

} // namespace radlabel::workflows
