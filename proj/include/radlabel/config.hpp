#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace radlabel {

// Settings shared by every workflow. Text format is one "key = value" per
// line with '#' comments; list values are comma separated. Empty path values
// select the data files compiled into the library.
struct PipelineConfig {
    std::string lexicon;
    std::string abbreviations;
    std::string verbs;
    std::vector<std::string> headers{"History", "Comparison", "Impression", "Findings", "Indication"};
    std::vector<std::string> scored_sections{"Impression", "Findings", "preamble"};
    std::string decoder = "lexicon";  // "lexicon" or "viterbi"
    double emission_boost = 5.0;
    bool drop_uncertain = false;
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    bool operator==(const PipelineConfig&) const = default;
};

// Strict parse: unknown keys, repeated keys, bad values and missing files are
// InputErrors that name the line and key.
PipelineConfig parse_config(std::string_view body, std::string_view source = "<config>");
PipelineConfig load_config(const std::string& path);

// Applies one setting with the same validation as parse_config.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

std::string serialize_config(const PipelineConfig& config);

} // namespace radlabel
