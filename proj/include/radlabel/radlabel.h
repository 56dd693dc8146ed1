#ifndef RADLABEL_RADLABEL_H
#define RADLABEL_RADLABEL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define RL_API __declspec(dllexport)
#else
#  define RL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rl_status {
    RL_OK = 0,
    RL_ERR_INPUT = 1,      /* malformed or inconsistent input data */
    RL_ERR_CONTRACT = 2,   /* precondition violated by the caller */
    RL_ERR_INTEGRITY = 3,  /* internal structure failed its invariants */
    RL_ERR_UNDEFINED = 4,  /* quantity undefined for this input */
    RL_ERR_SIZE = 5,       /* input exceeds a size guard */
    RL_ERR_NULL = 6,       /* required pointer argument was NULL */
    RL_ERR_INTERNAL = 7
} rl_status;

typedef struct rl_config rl_config;
typedef struct rl_pipeline rl_pipeline;

/* Message for the last failing call on this thread; "" after success. */
RL_API const char* rl_last_error(void);
RL_API const char* rl_version(void);

/* Every char** output is allocated by the library. */
RL_API void rl_string_free(char* s);

/* ---- configuration ---- */

RL_API rl_status rl_config_new(rl_config** out);
/* body is "key = value" text; source names it in error messages. */
RL_API rl_status rl_config_parse(const char* body, const char* source, rl_config** out);
RL_API rl_status rl_config_set(rl_config* cfg, const char* key, const char* value);
RL_API rl_status rl_config_seed(const rl_config* cfg, uint64_t* out);
RL_API rl_status rl_config_serialize(const rl_config* cfg, char** out);
RL_API void rl_config_free(rl_config* cfg);

/* cfg may be NULL for defaults. The pipeline copies what it needs. */
RL_API rl_status rl_pipeline_new(const rl_config* cfg, rl_pipeline** out);
RL_API void rl_pipeline_free(rl_pipeline* p);

/* ---- report workflows: JSONL {"study_id","text"} in ---- */

RL_API rl_status rl_tokenize(const rl_pipeline* p, const char* reports_jsonl, char** out_jsonl);
RL_API rl_status rl_parse(const rl_pipeline* p, const char* reports_jsonl, char** out_jsonl);
RL_API rl_status rl_label(const rl_pipeline* p, const char* reports_jsonl, char** out_csv);

typedef enum rl_similarity_kind { RL_SIM_OVERLAP = 0, RL_SIM_JACCARD = 1 } rl_similarity_kind;
RL_API rl_status rl_similarity(const rl_pipeline* p, const char* reports_jsonl, rl_similarity_kind kind,
                               char** out_csv);

typedef enum rl_frequency_kind { RL_FREQ_VERB = 0, RL_FREQ_ENTITY = 1 } rl_frequency_kind;
RL_API rl_status rl_frequency(const rl_pipeline* p, const char* reports_jsonl, rl_frequency_kind kind,
                              char** out_csv);

/* ---- tabular workflows ---- */

typedef enum rl_metric_format { RL_METRICS_JSON = 0, RL_METRICS_TABLE = 1 } rl_metric_format;
RL_API rl_status rl_metrics(const char* predictions_csv, double threshold, rl_metric_format format, char** out);

RL_API rl_status rl_prevalence(const char* labels_csv, char** out_csv);

/* has_seed != 0 replaces the plan's seed with `seed`. */
RL_API rl_status rl_rebalance(const char* labels_csv, const char* plan_json, int has_seed, uint64_t seed,
                              char** out_csv);

typedef enum rl_weight_scheme { RL_WEIGHTS_INVERSE_FREQ = 0, RL_WEIGHTS_NONE = 1 } rl_weight_scheme;

typedef struct rl_train_options {
    double learning_rate;
    uint64_t max_epochs;
    uint64_t patience;
    uint64_t seed;
    rl_weight_scheme weights;
} rl_train_options;

RL_API rl_train_options rl_train_options_default(void);
RL_API rl_status rl_train_head(const char* features_csv, const char* labels_csv, const char* split_csv,
                               const rl_train_options* options, char** out_params_json, char** out_history_csv);

/* ---- images ---- */

typedef enum rl_resample { RL_RESAMPLE_NEAREST = 0, RL_RESAMPLE_BILINEAR = 1 } rl_resample;

/* "HxW" -> height, width. */
RL_API rl_status rl_parse_size(const char* spec, size_t* out_h, size_t* out_w);
RL_API rl_status rl_gradcam(const char* maps_tensor, const char* grads_tensor, size_t out_h, size_t out_w,
                            rl_resample mode, char** out_pgm);
RL_API rl_status rl_preprocess_image(const unsigned char* pgm, size_t len, size_t out_h, size_t out_w,
                                     char** out_tensor);

/* ---- numeric kernels ---- */

#define RL_TAG_COUNT 5 /* ANAT, OBS, MOD, NEG, O */

/* emissions: n*5 row-major; transitions: 5*5 [prev][cur]; tags_out: n. */
RL_API rl_status rl_viterbi_decode(size_t n, const double* emissions, const double* transitions, int* tags_out,
                                   double* score_out);
RL_API rl_status rl_brute_force_decode(size_t n, const double* emissions, const double* transitions,
                                       int* tags_out, double* score_out);

typedef enum rl_auroc_method { RL_AUROC_RANK = 0, RL_AUROC_TRAPEZOID = 1 } rl_auroc_method;
RL_API rl_status rl_auroc(size_t n, const double* scores, const uint8_t* labels, rl_auroc_method method,
                          double* out);

/* labels/conditions: prevalence counts in CSV column order. */
RL_API rl_status rl_class_weights(const uint64_t present[4], uint64_t total, rl_weight_scheme scheme,
                                  double weights_out[4]);

#ifdef __cplusplus
}
#endif

#endif
