#include "radlabel/rebalance.hpp"

#include <cmath>
#include <numeric>

#include "json.hpp"
#include "radlabel/errors.hpp"
#include "radlabel/prng.hpp"

namespace radlabel {

PrevalenceTable prevalence(std::span<const LabelVector> labels) {
    PrevalenceTable t;
    t.total = labels.size();
    for (const auto& v : labels) {
        for (auto c : kAllConditions) {
            if (v.status(c) == LabelStatus::Present) ++t.present[index_of(c)];
        }
    }
    return t;
}

std::string prevalence_to_csv(const PrevalenceTable& t) {
    std::string out = "condition,present,absent\n";
    for (auto c : kAllConditions) {
        out += std::string(condition_name(c)) + "," + std::to_string(t.present[index_of(c)]) + "," +
               std::to_string(t.absent(c)) + "\n";
    }
    out += "total," + std::to_string(t.total) + ",\n";
    return out;
}

RebalancePlan parse_plan_json(std::string_view body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("plan JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("plan JSON: expected an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "seed" && key != "keep") throw InputError("plan JSON: unknown key '" + key + "'");
    }
    RebalancePlan plan;
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InputError("plan JSON: seed must be a non-negative integer");
        plan.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("keep")) {
        if (!j["keep"].is_object()) throw InputError("plan JSON: keep must be an object");
        for (const auto& [name, value] : j["keep"].items()) {
            auto c = parse_condition(name);
            if (!c) throw InputError("plan JSON: unknown condition '" + name + "'");
            if (!value.is_number()) throw InputError("plan JSON: fraction for '" + name + "' must be a number");
            double f = value.get<double>();
            if (!(f > 0.0 && f <= 1.0)) throw InputError("plan JSON: fraction for '" + name + "' must be in (0, 1]");
            plan.keep_fraction[*c] = f;
        }
    }
    return plan;
}

std::optional<Condition> primary_class(const LabelVector& v) {
    static constexpr std::array<Condition, kConditionCount> order = {
        Condition::NoFinding, Condition::PleuralEffusion, Condition::Pneumothorax, Condition::Pneumonia};
    for (auto c : order) {
        if (v.status(c) == LabelStatus::Present) return c;
    }
    return std::nullopt;
}

std::vector<LabelVector> downsample(std::span<const LabelVector> records, const RebalancePlan& plan) {
    for (const auto& [c, f] : plan.keep_fraction) {
        if (!(f > 0.0 && f <= 1.0)) {
            throw InputError("keep fraction for " + std::string(condition_name(c)) + " must be in (0, 1]");
        }
    }
    std::vector<bool> keep(records.size(), true);
    Xoshiro256 rng(plan.seed);
    for (const auto& [c, f] : plan.keep_fraction) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (primary_class(records[i]) == c) members.push_back(i);
        }
        auto target = static_cast<std::size_t>(std::llround(static_cast<double>(members.size()) * f));
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[rng.below(i)]);
        }
        for (std::size_t k = target; k < members.size(); ++k) keep[members[k]] = false;
    }
    std::vector<LabelVector> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (keep[i]) out.push_back(records[i]);
    }
    return out;
}

std::array<double, kConditionCount> class_weights(const PrevalenceTable& t, WeightScheme scheme) {
    std::array<double, kConditionCount> w;
    w.fill(1.0);
    if (scheme == WeightScheme::None) return w;
    for (auto c : kAllConditions) {
        auto n = t.present[index_of(c)];
        if (n == 0) {
            throw UndefinedError("inverse-frequency weight undefined: no " + std::string(condition_name(c)) +
                                 " samples");
        }
        w[index_of(c)] = static_cast<double>(t.total) / (static_cast<double>(kConditionCount) * static_cast<double>(n));
    }
    return w;
}

} // namespace radlabel
