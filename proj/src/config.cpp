#include "radlabel/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "radlabel/errors.hpp"
#include "radlabel/text.hpp"

namespace radlabel {

namespace {

std::vector<std::string> parse_list(std::string_view v) {
    std::vector<std::string> out;
    for (auto& item : text::split(v, ',')) {
        auto t = text::trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ",";
        out += s;
    }
    return out;
}

} // namespace

namespace {

void apply(PipelineConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
    auto fail = [&](const std::string& what) { return InputError(where + "key '" + key + "': " + what); };
    auto need_file = [&](std::string& field) {
        if (!value.empty() && !std::filesystem::is_regular_file(value)) throw fail("file not found: " + value);
        field = value;
    };
    auto need_bool = [&]() {
        if (value == "true") return true;
        if (value == "false") return false;
        throw fail("expected true or false");
    };
    auto need_uint = [&]() {
        std::uint64_t out = 0;
        auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || p != value.data() + value.size()) throw fail("expected a non-negative integer");
        return out;
    };

    if (key == "lexicon") {
        need_file(cfg.lexicon);
    } else if (key == "abbreviations") {
        need_file(cfg.abbreviations);
    } else if (key == "verbs") {
        need_file(cfg.verbs);
    } else if (key == "headers") {
        cfg.headers = parse_list(value);
        if (cfg.headers.empty()) throw fail("needs at least one header");
    } else if (key == "sections") {
        cfg.scored_sections = parse_list(value);
    } else if (key == "decoder") {
        if (value != "lexicon" && value != "viterbi") throw fail("expected lexicon or viterbi");
        cfg.decoder = value;
    } else if (key == "emission_boost") {
        char* end = nullptr;
        double v = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0' || !std::isfinite(v)) throw fail("expected a number");
        cfg.emission_boost = v;
    } else if (key == "drop_uncertain") {
        cfg.drop_uncertain = need_bool();
    } else if (key == "seed") {
        cfg.seed = need_uint();
    } else if (key == "jobs") {
        auto v = need_uint();
        if (v == 0 || v > 256) throw fail("expected 1..256");
        cfg.jobs = static_cast<unsigned>(v);
    } else {
        throw fail("unknown key");
    }
}

} // namespace

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value) {
    apply(config, std::string(text::trim(key)), std::string(text::trim(value)), "");
}

PipelineConfig parse_config(std::string_view body, std::string_view source) {
    PipelineConfig cfg;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto nl = body.find('\n', pos);
        auto line = text::trim(body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        ++line_no;
        pos = nl == std::string_view::npos ? body.size() + 1 : nl + 1;
        if (line.empty() || line.front() == '#') continue;

        std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw InputError(where + "expected 'key = value'");
        std::string key(text::trim(line.substr(0, eq)));
        std::string value(text::trim(line.substr(eq + 1)));
        if (!seen.insert(key).second) throw InputError(where + "key '" + key + "': given more than once");
        apply(cfg, key, value, where);
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) { return parse_config(text::read_file(path), path); }

std::string serialize_config(const PipelineConfig& cfg) {
    std::string out;
    auto put = [&](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("lexicon", cfg.lexicon);
    put("abbreviations", cfg.abbreviations);
    put("verbs", cfg.verbs);
    put("headers", join(cfg.headers));
    put("sections", join(cfg.scored_sections));
    put("decoder", cfg.decoder);
    put("emission_boost", text::format_number(cfg.emission_boost));
    put("drop_uncertain", cfg.drop_uncertain ? "true" : "false");
    put("seed", std::to_string(cfg.seed));
    put("jobs", std::to_string(cfg.jobs));
    return out;
}

} // namespace radlabel
