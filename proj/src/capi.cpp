#include "radlabel/radlabel.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "radlabel/config.hpp"
#include "radlabel/errors.hpp"
#include "radlabel/metrics.hpp"
#include "radlabel/pipeline.hpp"
#include "radlabel/rebalance.hpp"
#include "radlabel/tagger.hpp"
#include "radlabel/workflows.hpp"

struct rl_config {
    radlabel::PipelineConfig value;
};

struct rl_pipeline {
    radlabel::Pipeline value;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument {
    const char* name;
};

template <typename F>
rl_status guarded(F&& body) {
    try {
        g_last_error.clear();
        body();
        return RL_OK;
    } catch (const NullArgument& n) {
        g_last_error = std::string("argument '") + n.name + "' is NULL";
        return RL_ERR_NULL;
    } catch (const radlabel::InputError& e) {
        g_last_error = e.what();
        return RL_ERR_INPUT;
    } catch (const radlabel::ContractError& e) {
        g_last_error = e.what();
        return RL_ERR_CONTRACT;
    } catch (const radlabel::IntegrityError& e) {
        g_last_error = e.what();
        return RL_ERR_INTEGRITY;
    } catch (const radlabel::UndefinedError& e) {
        g_last_error = e.what();
        return RL_ERR_UNDEFINED;
    } catch (const radlabel::SizeError& e) {
        g_last_error = e.what();
        return RL_ERR_SIZE;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return RL_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RL_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return RL_ERR_INTERNAL;
    }
}

template <typename T>
T* need(T* p, const char* name) {
    if (!p) throw NullArgument{name};
    return p;
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

radlabel::ScoreTable make_table(std::size_t n, const double* emissions, const double* transitions) {
    radlabel::ScoreTable t;
    t.emissions.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < radlabel::kTagCount; ++k) t.emissions[i][k] = emissions[i * radlabel::kTagCount + k];
    for (std::size_t a = 0; a < radlabel::kTagCount; ++a)
        for (std::size_t b = 0; b < radlabel::kTagCount; ++b) t.transitions[a][b] = transitions[a * radlabel::kTagCount + b];
    return t;
}

void store(const radlabel::Decoding& d, int* tags_out, double* score_out) {
    for (std::size_t i = 0; i < d.tags.size(); ++i) tags_out[i] = static_cast<int>(d.tags[i]);
    *score_out = d.score;
}

radlabel::WeightScheme scheme_of(rl_weight_scheme s) {
    switch (s) {
    case RL_WEIGHTS_INVERSE_FREQ: return radlabel::WeightScheme::InverseFrequency;
    case RL_WEIGHTS_NONE: return radlabel::WeightScheme::None;
    }
    throw radlabel::ContractError("unknown weight scheme");
}

} // namespace

extern "C" {

const char* rl_last_error(void) { return g_last_error.c_str(); }

const char* rl_version(void) { return RADLABEL_VERSION; }

void rl_string_free(char* s) { std::free(s); }

rl_status rl_config_new(rl_config** out) {
    return guarded([&] { *need(out, "out") = new rl_config{}; });
}

rl_status rl_config_parse(const char* body, const char* source, rl_config** out) {
    return guarded([&] {
        need(out, "out");
        auto cfg = radlabel::parse_config(need(body, "body"), source ? source : "<config>");
        *out = new rl_config{std::move(cfg)};
    });
}

rl_status rl_config_set(rl_config* cfg, const char* key, const char* value) {
    return guarded([&] { radlabel::set_config_value(need(cfg, "cfg")->value, need(key, "key"), need(value, "value")); });
}

rl_status rl_config_seed(const rl_config* cfg, uint64_t* out) {
    return guarded([&] { *need(out, "out") = need(cfg, "cfg")->value.seed; });
}

rl_status rl_config_serialize(const rl_config* cfg, char** out) {
    return guarded([&] { *need(out, "out") = dup_string(radlabel::serialize_config(need(cfg, "cfg")->value)); });
}

void rl_config_free(rl_config* cfg) { delete cfg; }

rl_status rl_pipeline_new(const rl_config* cfg, rl_pipeline** out) {
    return guarded([&] {
        need(out, "out");
        *out = new rl_pipeline{radlabel::Pipeline(cfg ? cfg->value : radlabel::PipelineConfig{})};
    });
}

void rl_pipeline_free(rl_pipeline* p) { delete p; }

rl_status rl_tokenize(const rl_pipeline* p, const char* reports_jsonl, char** out_jsonl) {
    return guarded([&] {
        need(out_jsonl, "out_jsonl");
        *out_jsonl = dup_string(radlabel::workflows::tokenize_reports(need(p, "p")->value, need(reports_jsonl, "reports_jsonl")));
    });
}

rl_status rl_parse(const rl_pipeline* p, const char* reports_jsonl, char** out_jsonl) {
    return guarded([&] {
        need(out_jsonl, "out_jsonl");
        *out_jsonl = dup_string(radlabel::workflows::parse_reports(need(p, "p")->value, need(reports_jsonl, "reports_jsonl")));
    });
}

rl_status rl_label(const rl_pipeline* p, const char* reports_jsonl, char** out_csv) {
    return guarded([&] {
        need(out_csv, "out_csv");
        *out_csv = dup_string(radlabel::workflows::label_reports(need(p, "p")->value, need(reports_jsonl, "reports_jsonl")));
    });
}

rl_status rl_similarity(const rl_pipeline* p, const char* reports_jsonl, rl_similarity_kind kind, char** out_csv) {
    return guarded([&] {
        need(out_csv, "out_csv");
        auto k = kind == RL_SIM_JACCARD ? radlabel::SimilarityKind::Jaccard : radlabel::SimilarityKind::Overlap;
        *out_csv = dup_string(radlabel::workflows::similarity_reports(need(p, "p")->value, need(reports_jsonl, "reports_jsonl"), k));
    });
}

rl_status rl_frequency(const rl_pipeline* p, const char* reports_jsonl, rl_frequency_kind kind, char** out_csv) {
    return guarded([&] {
        need(out_csv, "out_csv");
        auto k = kind == RL_FREQ_VERB ? radlabel::FrequencyKind::Verb : radlabel::FrequencyKind::Entity;
        *out_csv = dup_string(radlabel::workflows::frequency_reports(need(p, "p")->value, need(reports_jsonl, "reports_jsonl"), k));
    });
}

rl_status rl_metrics(const char* predictions_csv, double threshold, rl_metric_format format, char** out) {
    return guarded([&] {
        need(out, "out");
        auto f = format == RL_METRICS_TABLE ? radlabel::workflows::MetricFormat::Table : radlabel::workflows::MetricFormat::Json;
        *out = dup_string(radlabel::workflows::evaluate_metrics(need(predictions_csv, "predictions_csv"), threshold, f));
    });
}

rl_status rl_prevalence(const char* labels_csv, char** out_csv) {
    return guarded([&] {
        need(out_csv, "out_csv");
        *out_csv = dup_string(radlabel::workflows::prevalence_report(need(labels_csv, "labels_csv")));
    });
}

rl_status rl_rebalance(const char* labels_csv, const char* plan_json, int has_seed, uint64_t seed, char** out_csv) {
    return guarded([&] {
        need(out_csv, "out_csv");
        std::optional<std::uint64_t> s;
        if (has_seed) s = seed;
        *out_csv = dup_string(radlabel::workflows::rebalance_labels(need(labels_csv, "labels_csv"), need(plan_json, "plan_json"), s));
    });
}

rl_train_options rl_train_options_default(void) {
    radlabel::workflows::TrainOptions d;
    return {d.learning_rate, d.max_epochs, d.patience, d.seed, RL_WEIGHTS_INVERSE_FREQ};
}

rl_status rl_train_head(const char* features_csv, const char* labels_csv, const char* split_csv,
                        const rl_train_options* options, char** out_params_json, char** out_history_csv) {
    return guarded([&] {
        need(out_params_json, "out_params_json");
        need(out_history_csv, "out_history_csv");
        const auto& o = *need(options, "options");
        radlabel::workflows::TrainOptions opts;
        opts.learning_rate = o.learning_rate;
        opts.max_epochs = o.max_epochs;
        opts.patience = o.patience;
        opts.seed = o.seed;
        opts.weights = scheme_of(o.weights);
        auto result = radlabel::workflows::train_head(need(features_csv, "features_csv"), need(labels_csv, "labels_csv"),
                                                      need(split_csv, "split_csv"), opts);
        char* params = dup_string(result.params_json);
        try {
            *out_history_csv = dup_string(result.history_csv);
        } catch (...) {
            std::free(params);
            throw;
        }
        *out_params_json = params;
    });
}

rl_status rl_parse_size(const char* spec, size_t* out_h, size_t* out_w) {
    return guarded([&] {
        auto [h, w] = radlabel::parse_size(need(spec, "spec"));
        *need(out_h, "out_h") = h;
        *need(out_w, "out_w") = w;
    });
}

rl_status rl_gradcam(const char* maps_tensor, const char* grads_tensor, size_t out_h, size_t out_w, rl_resample mode,
                     char** out_pgm) {
    return guarded([&] {
        need(out_pgm, "out_pgm");
        auto m = mode == RL_RESAMPLE_NEAREST ? radlabel::Resample::Nearest : radlabel::Resample::Bilinear;
        if (out_h == 0 || out_w == 0) throw radlabel::InputError("output size must be positive");
        *out_pgm = dup_string(radlabel::workflows::gradcam(need(maps_tensor, "maps_tensor"), need(grads_tensor, "grads_tensor"),
                                                           out_h, out_w, m));
    });
}

rl_status rl_preprocess_image(const unsigned char* pgm, size_t len, size_t out_h, size_t out_w, char** out_tensor) {
    return guarded([&] {
        need(out_tensor, "out_tensor");
        need(pgm, "pgm");
        if (out_h == 0 || out_w == 0) throw radlabel::InputError("output size must be positive");
        std::string_view bytes(reinterpret_cast<const char*>(pgm), len);
        *out_tensor = dup_string(radlabel::workflows::preprocess_image(bytes, out_h, out_w));
    });
}

rl_status rl_viterbi_decode(size_t n, const double* emissions, const double* transitions, int* tags_out,
                            double* score_out) {
    return guarded([&] {
        auto table = make_table(n, need(emissions, "emissions"), need(transitions, "transitions"));
        store(radlabel::viterbi_decode(table), need(tags_out, "tags_out"), need(score_out, "score_out"));
    });
}

rl_status rl_brute_force_decode(size_t n, const double* emissions, const double* transitions, int* tags_out,
                                double* score_out) {
    return guarded([&] {
        auto table = make_table(n, need(emissions, "emissions"), need(transitions, "transitions"));
        store(radlabel::brute_force_decode(table), need(tags_out, "tags_out"), need(score_out, "score_out"));
    });
}

rl_status rl_auroc(size_t n, const double* scores, const uint8_t* labels, rl_auroc_method method, double* out) {
    return guarded([&] {
        auto m = method == RL_AUROC_TRAPEZOID ? radlabel::AurocMethod::Trapezoid : radlabel::AurocMethod::Rank;
        *need(out, "out") = radlabel::auroc(std::span(need(scores, "scores"), n), std::span(need(labels, "labels"), n), m);
    });
}

rl_status rl_class_weights(const uint64_t present[4], uint64_t total, rl_weight_scheme scheme, double weights_out[4]) {
    return guarded([&] {
        radlabel::PrevalenceTable t;
        need(present, "present");
        for (std::size_t i = 0; i < radlabel::kConditionCount; ++i) {
            if (present[i] > total) throw radlabel::InputError("present count exceeds total");
            t.present[i] = present[i];
        }
        t.total = total;
        auto w = radlabel::class_weights(t, scheme_of(scheme));
        need(weights_out, "weights_out");
        for (std::size_t i = 0; i < w.size(); ++i) weights_out[i] = w[i];
    });
}

} // extern "C"
