// Command-line front end. Talks to the library only through radlabel.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radlabel/radlabel.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct Failure {
    int code;
    std::string message;
};

int exit_code_for(rl_status s) {
    switch (s) {
    case RL_OK: return kExitOk;
    case RL_ERR_INPUT:
    case RL_ERR_UNDEFINED:
    case RL_ERR_SIZE:
    case RL_ERR_NULL: return kExitInput;
    default: return kExitInternal;
    }
}

void check(rl_status s) {
    if (s != RL_OK) throw Failure{exit_code_for(s), rl_last_error()};
}

struct Owned {
    char* p = nullptr;
    ~Owned() { rl_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ConfigHandle {
    rl_config* p = nullptr;
    ~ConfigHandle() { rl_config_free(p); }
};

struct PipelineHandle {
    rl_pipeline* p = nullptr;
    ~PipelineHandle() { rl_pipeline_free(p); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kExitInput, "cannot open '" + path + "'"};
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (body.find('\0') != std::string::npos) throw Failure{kExitInput, "'" + path + "' contains NUL bytes"};
    return body;
}

std::string slurp_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kExitInput, "cannot open '" + path + "'"};
    return {(std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()};
}

void write_to(const std::string& path, const std::string& data) {
    if (path.empty()) {
        std::fwrite(data.data(), 1, data.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Failure{kExitInput, "cannot write '" + path + "'"};
}

// Flags shared by every subcommand.
struct Common {
    std::string in;
    std::string out;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
    bool drop_uncertain = false;
};

struct Invocation {
    std::string command;
    std::vector<std::pair<std::string, std::string>> args;  // flag, value as given
};

ConfigHandle make_config(const Common& c) {
    ConfigHandle cfg;
    if (c.config.empty()) {
        check(rl_config_new(&cfg.p));
    } else {
        auto body = slurp(c.config);
        check(rl_config_parse(body.c_str(), c.config.c_str(), &cfg.p));
    }
    if (c.seed) check(rl_config_set(cfg.p, "seed", std::to_string(*c.seed).c_str()));
    if (c.jobs) check(rl_config_set(cfg.p, "jobs", std::to_string(*c.jobs).c_str()));
    if (c.drop_uncertain) check(rl_config_set(cfg.p, "drop_uncertain", "true"));
    return cfg;
}

// "<out>.provenance": tool version, subcommand, flags and the effective config.
void write_provenance(const std::string& out, const Invocation& inv, const ConfigHandle& cfg) {
    if (out.empty()) return;
    Owned text;
    check(rl_config_serialize(cfg.p, &text.p));
    std::ostringstream s;
    s << "# radlabel " << rl_version() << "\n";
    s << "# command " << inv.command << "\n";
    for (const auto& [flag, value] : inv.args) s << "# " << flag << " " << value << "\n";
    s << text.str();
    write_to(out + ".provenance", s.str());
}

void add_common(CLI::App* sub, Common& c, bool wants_in = true) {
    if (wants_in) sub->add_option("--in", c.in, "Input file")->required();
    sub->add_option("--out", c.out, "Output file (standard output when omitted)");
    sub->add_option("--config", c.config, "Pipeline configuration file");
    sub->add_option("--seed", c.seed, "Seed overriding the configuration");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radiology report labeling and evaluation toolkit"};
    app.set_version_flag("--version", std::string(rl_version()));
    app.require_subcommand(1);

    Common common;
    std::string freq_kind = "entity";
    bool jaccard = false;
    double threshold = 0.5;
    std::string metric_format = "json";
    std::string plan_path;
    std::string features_path, labels_path, split_path, history_path;
    rl_train_options train = rl_train_options_default();
    std::string weight_scheme = "inverse";
    std::string maps_path, grads_path, size_spec = "320x320", resample = "bilinear";

    auto* tokenize = app.add_subcommand("tokenize", "Tokens and sentence spans per report (JSONL)");
    auto* parse = app.add_subcommand("parse", "Entity/relation graph per report (JSONL)");
    auto* label = app.add_subcommand("label", "Per-condition labels (CSV)");
    auto* similarity = app.add_subcommand("similarity", "Pairwise report similarity per facet (CSV)");
    auto* freq = app.add_subcommand("freq", "Verb or entity frequency table (CSV)");
    auto* metrics = app.add_subcommand("metrics", "Confusion, precision/recall/F1 and AUROC from predictions");
    auto* prevalence = app.add_subcommand("prevalence", "Present/absent counts per condition (CSV)");
    auto* rebalance = app.add_subcommand("rebalance", "Seeded per-class downsampling of a labels CSV");
    auto* train_head = app.add_subcommand("train-head", "Fit the sigmoid head with weighted BCE and early stopping");
    auto* gradcam = app.add_subcommand("gradcam", "Heatmap PGM from feature-map and gradient tensors");
    auto* preprocess = app.add_subcommand("preprocess-image", "Resize a PGM and scale it to [0,1] (tensor text)");

    for (auto* sub : {tokenize, parse, label, similarity, freq}) {
        add_common(sub, common);
        sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    }
    label->add_flag("--drop-uncertain", common.drop_uncertain, "Drop reports with any uncertain label");
    similarity->add_flag("--jaccard", jaccard, "Intersection over union instead of the overlap score");
    freq->add_option("--kind", freq_kind, "verb or entity")->check(CLI::IsMember({"verb", "entity"}));

    add_common(metrics, common);
    metrics->add_option("--threshold", threshold, "Score threshold for a positive call")->check(CLI::Range(0.0, 1.0));
    metrics->add_option("--format", metric_format, "json or table")->check(CLI::IsMember({"json", "table"}));

    add_common(prevalence, common);

    add_common(rebalance, common);
    rebalance->add_option("--plan", plan_path, "Plan JSON")->required();

    add_common(train_head, common, false);
    train_head->add_option("--features", features_path, "Feature CSV")->required();
    train_head->add_option("--labels", labels_path, "Labels CSV")->required();
    train_head->add_option("--split", split_path, "Split CSV")->required();
    train_head->add_option("--history", history_path, "Per-epoch loss CSV");
    train_head->add_option("--lr", train.learning_rate, "Learning rate");
    train_head->add_option("--epochs", train.max_epochs, "Maximum epochs");
    train_head->add_option("--patience", train.patience, "Epochs without improvement before stopping");
    train_head->add_option("--weights", weight_scheme, "inverse or none")->check(CLI::IsMember({"inverse", "none"}));

    add_common(gradcam, common, false);
    gradcam->add_option("--maps", maps_path, "Feature maps (tensor text)")->required();
    gradcam->add_option("--grads", grads_path, "Gradients (tensor text)")->required();
    gradcam->add_option("--size", size_spec, "Output HxW");
    gradcam->add_option("--mode", resample, "bilinear or nearest")->check(CLI::IsMember({"bilinear", "nearest"}));

    add_common(preprocess, common);
    preprocess->add_option("--size", size_spec, "Output HxW");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        Invocation inv{sub->get_name(), {}};
        for (const auto* opt : sub->get_options()) {
            if (opt->count() == 0 || opt->get_name() == "--help") continue;
            std::string value;
            for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
            inv.args.emplace_back(opt->get_name(), value.empty() ? "true" : value);
        }
        ConfigHandle cfg = make_config(common);
        Owned out;

        if (sub == tokenize || sub == parse || sub == label || sub == similarity || sub == freq) {
            auto reports = slurp(common.in);
            PipelineHandle pipeline;
            check(rl_pipeline_new(cfg.p, &pipeline.p));
            if (sub == tokenize) check(rl_tokenize(pipeline.p, reports.c_str(), &out.p));
            if (sub == parse) check(rl_parse(pipeline.p, reports.c_str(), &out.p));
            if (sub == label) check(rl_label(pipeline.p, reports.c_str(), &out.p));
            if (sub == similarity) {
                check(rl_similarity(pipeline.p, reports.c_str(), jaccard ? RL_SIM_JACCARD : RL_SIM_OVERLAP, &out.p));
            }
            if (sub == freq) {
                check(rl_frequency(pipeline.p, reports.c_str(), freq_kind == "verb" ? RL_FREQ_VERB : RL_FREQ_ENTITY,
                                   &out.p));
            }
        } else if (sub == metrics) {
            auto preds = slurp(common.in);
            check(rl_metrics(preds.c_str(), threshold, metric_format == "table" ? RL_METRICS_TABLE : RL_METRICS_JSON,
                             &out.p));
        } else if (sub == prevalence) {
            auto labels = slurp(common.in);
            check(rl_prevalence(labels.c_str(), &out.p));
        } else if (sub == rebalance) {
            auto labels = slurp(common.in);
            auto plan = slurp(plan_path);
            check(rl_rebalance(labels.c_str(), plan.c_str(), common.seed ? 1 : 0, common.seed.value_or(0), &out.p));
        } else if (sub == train_head) {
            auto features = slurp(features_path);
            auto labels = slurp(labels_path);
            auto split = slurp(split_path);
            std::uint64_t seed = 0;
            check(rl_config_seed(cfg.p, &seed));
            train.seed = seed;
            train.weights = weight_scheme == "none" ? RL_WEIGHTS_NONE : RL_WEIGHTS_INVERSE_FREQ;
            Owned history;
            check(rl_train_head(features.c_str(), labels.c_str(), split.c_str(), &train, &out.p, &history.p));
            if (!history_path.empty()) write_to(history_path, history.str());
        } else if (sub == gradcam) {
            auto maps = slurp(maps_path);
            auto grads = slurp(grads_path);
            std::size_t h = 0, w = 0;
            check(rl_parse_size(size_spec.c_str(), &h, &w));
            check(rl_gradcam(maps.c_str(), grads.c_str(), h, w,
                             resample == "nearest" ? RL_RESAMPLE_NEAREST : RL_RESAMPLE_BILINEAR, &out.p));
        } else if (sub == preprocess) {
            auto image = slurp_binary(common.in);
            std::size_t h = 0, w = 0;
            check(rl_parse_size(size_spec.c_str(), &h, &w));
            check(rl_preprocess_image(reinterpret_cast<const unsigned char*>(image.data()), image.size(), h, w, &out.p));
        }

        write_to(common.out, out.str());
        write_provenance(common.out, inv, cfg);
        return kExitOk;
    } catch (const Failure& f) {
        std::cerr << "radlabel: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "radlabel: " << e.what() << "\n";
        return kExitInternal;
    }
}
