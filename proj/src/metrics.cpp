#include "radlabel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>

#include "json.hpp"
#include "radlabel/csv.hpp"
#include "radlabel/errors.hpp"
#include "radlabel/text.hpp"

namespace radlabel {

namespace {

void require_binary(std::span<const std::uint8_t> v, const char* what) {
    for (auto x : v) {
        if (x > 1) throw InputError(std::string(what) + " must be 0 or 1");
    }
}

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

ConfusionCounts confusion(std::span<const std::uint8_t> y_true, std::span<const std::uint8_t> y_pred) {
    if (y_true.size() != y_pred.size()) throw InputError("label and prediction lengths differ");
    if (y_true.empty()) throw InputError("confusion counts need at least one sample");
    require_binary(y_true, "labels");
    require_binary(y_pred, "predictions");
    ConfusionCounts c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i]) {
            (y_pred[i] ? c.tp : c.fn)++;
        } else {
            (y_pred[i] ? c.fp : c.tn)++;
        }
    }
    return c;
}

PrecisionRecallF1 precision_recall_f1(const ConfusionCounts& c) {
    PrecisionRecallF1 out;
    out.precision = ratio(c.tp, c.tp + c.fp);
    out.recall = ratio(c.tp, c.tp + c.fn);
    if (out.precision && out.recall && *out.precision + *out.recall > 0.0) {
        double p = *out.precision;
        double r = *out.recall;
        out.f1 = 2.0 * p * r / (p + r);
    }
    return out;
}

double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels, AurocMethod method) {
    if (scores.size() != labels.size()) throw InputError("score and label lengths differ");
    require_binary(labels, "labels");
    for (double s : scores) {
        if (!std::isfinite(s)) throw InputError("non-finite score");
    }
    std::uint64_t pos = std::count(labels.begin(), labels.end(), std::uint8_t{1});
    std::uint64_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) throw UndefinedError("AUROC needs both positive and negative samples");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    if (method == AurocMethod::Rank) {
        // Mid-ranks are half-integers, so the rank sum is exact.
        double rank_sum = 0.0;
        for (std::size_t i = 0; i < order.size();) {
            std::size_t j = i;
            while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
            double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
            for (std::size_t k = i; k < j; ++k) {
                if (labels[order[k]]) rank_sum += mid;
            }
            i = j;
        }
        double u = rank_sum - static_cast<double>(pos) * static_cast<double>(pos + 1) / 2.0;
        return u / (static_cast<double>(pos) * static_cast<double>(neg));
    }

    // Walk thresholds from the highest score down; twice the area stays integral.
    std::uint64_t area2 = 0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    for (std::size_t i = order.size(); i > 0;) {
        std::size_t j = i;
        std::uint64_t tp_prev = tp;
        std::uint64_t fp_prev = fp;
        while (j > 0 && scores[order[j - 1]] == scores[order[i - 1]]) {
            --j;
            (labels[order[j]] ? tp : fp)++;
        }
        area2 += (fp - fp_prev) * (tp + tp_prev);
        i = j;
    }
    return static_cast<double>(area2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

MetricReport macro_report(std::vector<ConditionMetrics> per_condition) {
    if (per_condition.empty()) throw InputError("macro report needs at least one condition");
    MetricReport report;
    report.per_condition = std::move(per_condition);
    auto mean = [&](auto field, std::vector<std::string>& excluded) -> std::optional<double> {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& c : report.per_condition) {
            const std::optional<double>& v = c.*field;
            if (v) {
                sum += *v;
                ++n;
            } else {
                excluded.push_back(c.condition);
            }
        }
        if (n == 0) return std::nullopt;
        return sum / static_cast<double>(n);
    };
    auto& m = report.macro;
    m.precision = mean(&ConditionMetrics::precision, m.excluded_precision);
    m.recall = mean(&ConditionMetrics::recall, m.excluded_recall);
    m.f1 = mean(&ConditionMetrics::f1, m.excluded_f1);
    m.auroc = mean(&ConditionMetrics::auroc, m.excluded_auroc);
    return report;
}

std::vector<Prediction> parse_predictions_csv(std::string_view body) {
    auto rows = csv::parse(body);
    if (rows.empty() || csv::join_row(rows[0]) != "study_id,condition,score,label") {
        throw InputError("predictions CSV: header must be 'study_id,condition,score,label'");
    }
    std::vector<Prediction> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto where = "predictions CSV row " + std::to_string(r + 1) + ": ";
        if (row.size() != 4) throw InputError(where + "expected 4 fields");
        Prediction p;
        p.study_id = row[0];
        p.condition = row[1];
        char* end = nullptr;
        p.score = std::strtod(row[2].c_str(), &end);
        if (row[2].empty() || *end != '\0' || !std::isfinite(p.score)) throw InputError(where + "bad score");
        if (row[3] != "0" && row[3] != "1") throw InputError(where + "label must be 0 or 1");
        p.label = row[3] == "1" ? 1 : 0;
        out.push_back(std::move(p));
    }
    return out;
}

MetricReport evaluate_predictions(std::span<const Prediction> predictions, double threshold) {
    std::vector<std::string> order;
    std::map<std::string, std::size_t> slot;
    std::vector<std::vector<const Prediction*>> groups;
    for (const auto& p : predictions) {
        auto [it, inserted] = slot.emplace(p.condition, groups.size());
        if (inserted) {
            order.push_back(p.condition);
            groups.emplace_back();
        }
        groups[it->second].push_back(&p);
    }
    std::vector<ConditionMetrics> per;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<double> scores;
        std::vector<std::uint8_t> truth;
        std::vector<std::uint8_t> pred;
        for (const auto* p : groups[g]) {
            scores.push_back(p->score);
            truth.push_back(p->label);
            pred.push_back(p->score >= threshold ? 1 : 0);
        }
        ConditionMetrics m;
        m.condition = order[g];
        m.counts = confusion(truth, pred);
        auto prf = precision_recall_f1(m.counts);
        m.precision = prf.precision;
        m.recall = prf.recall;
        m.f1 = prf.f1;
        try {
            m.auroc = auroc(scores, truth);
        } catch (const UndefinedError&) {
            m.auroc.reset();
        }
        per.push_back(std::move(m));
    }
    return macro_report(std::move(per));
}

namespace {

nlohmann::ordered_json number_or_null(const std::optional<double>& v) {
    if (!v) return nullptr;
    return std::strtod(text::format_number(*v).c_str(), nullptr);
}

std::string cell(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return buf;
}

} // namespace

std::string metric_report_json(const MetricReport& report) {
    nlohmann::ordered_json j;
    j["conditions"] = nlohmann::ordered_json::array();
    for (const auto& c : report.per_condition) {
        nlohmann::ordered_json jc;
        jc["condition"] = c.condition;
        jc["tp"] = c.counts.tp;
        jc["fp"] = c.counts.fp;
        jc["tn"] = c.counts.tn;
        jc["fn"] = c.counts.fn;
        jc["precision"] = number_or_null(c.precision);
        jc["recall"] = number_or_null(c.recall);
        jc["f1"] = number_or_null(c.f1);
        jc["auroc"] = number_or_null(c.auroc);
        j["conditions"].push_back(std::move(jc));
    }
    const auto& m = report.macro;
    nlohmann::ordered_json jm;
    jm["precision"] = number_or_null(m.precision);
    jm["recall"] = number_or_null(m.recall);
    jm["f1"] = number_or_null(m.f1);
    jm["auroc"] = number_or_null(m.auroc);
    jm["excluded"] = {{"precision", m.excluded_precision},
                      {"recall", m.excluded_recall},
                      {"f1", m.excluded_f1},
                      {"auroc", m.excluded_auroc}};
    j["macro"] = std::move(jm);
    return j.dump(2) + "\n";
}

std::string metric_report_table(const MetricReport& report) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-20s %10s %10s %10s %10s\n", "Condition", "Precision", "Recall", "F1-Score",
                  "AUROC");
    out += line;
    auto row = [&](const std::string& name, const auto& p, const auto& r, const auto& f, const auto& a) {
        std::snprintf(line, sizeof(line), "%-20s %10s %10s %10s %10s\n", name.c_str(), cell(p).c_str(),
                      cell(r).c_str(), cell(f).c_str(), cell(a).c_str());
        out += line;
    };
    for (const auto& c : report.per_condition) row(c.condition, c.precision, c.recall, c.f1, c.auroc);
    const auto& m = report.macro;
    row("Macro", m.precision, m.recall, m.f1, m.auroc);
    return out;
}

} // namespace radlabel
