#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radlabel {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

// Labels and predictions must be 0/1 and of equal, non-zero length.
ConfusionCounts confusion(std::span<const std::uint8_t> y_true, std::span<const std::uint8_t> y_pred);

// Empty optionals mark metrics whose denominator is zero.
struct PrecisionRecallF1 {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

PrecisionRecallF1 precision_recall_f1(const ConfusionCounts& c);

enum class AurocMethod {
    Rank,       // Mann-Whitney U with half credit for tied scores
    Trapezoid,  // area under the ROC polyline through every distinct threshold
};

// Throws UndefinedError unless both classes are present.
double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels,
             AurocMethod method = AurocMethod::Rank);

struct ConditionMetrics {
    std::string condition;
    ConfusionCounts counts;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> auroc;
};

struct MacroMetrics {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> auroc;
    // Conditions left out of each mean because the metric was undefined.
    std::vector<std::string> excluded_precision;
    std::vector<std::string> excluded_recall;
    std::vector<std::string> excluded_f1;
    std::vector<std::string> excluded_auroc;
};

struct MetricReport {
    std::vector<ConditionMetrics> per_condition;
    MacroMetrics macro;
};

// Unweighted means over the conditions where each metric is defined.
MetricReport macro_report(std::vector<ConditionMetrics> per_condition);

struct Prediction {
    std::string study_id;
    std::string condition;
    double score = 0.0;
    std::uint8_t label = 0;
};

// Header "study_id,condition,score,label".
std::vector<Prediction> parse_predictions_csv(std::string_view body);

// Conditions appear in order of first occurrence; y_pred = score >= threshold.
MetricReport evaluate_predictions(std::span<const Prediction> predictions, double threshold = 0.5);

std::string metric_report_json(const MetricReport& report);
std::string metric_report_table(const MetricReport& report);

} // namespace radlabel
