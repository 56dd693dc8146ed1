#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radlabel/condition.hpp"
#include "radlabel/labeler.hpp"

namespace radlabel {

struct PrevalenceTable {
    std::array<std::uint64_t, kConditionCount> present{};
    std::uint64_t total = 0;

    std::uint64_t absent(Condition c) const { return total - present[index_of(c)]; }
    bool operator==(const PrevalenceTable&) const = default;
};

PrevalenceTable prevalence(std::span<const LabelVector> labels);

// "condition,present,absent" rows in CSV column order, then a total row.
std::string prevalence_to_csv(const PrevalenceTable& table);

struct RebalancePlan {
    std::map<Condition, double> keep_fraction;  // each in (0, 1]
    std::uint64_t seed = 0;
};

// {"seed": int, "keep": {"No Finding": 0.09, "Pleural Effusion": 0.70}}
RebalancePlan parse_plan_json(std::string_view json);

// First Present condition in the order No Finding, Pleural Effusion,
// Pneumothorax, Pneumonia.
std::optional<Condition> primary_class(const LabelVector& v);

// For each planned class keeps exactly round(n_c * f_c) of the records whose
// primary class is c, chosen by a seeded Fisher-Yates shuffle (classes are
// processed in Condition order from one generator stream). Other records are
// kept. Output preserves input order.
std::vector<LabelVector> downsample(std::span<const LabelVector> records, const RebalancePlan& plan);

enum class WeightScheme { InverseFrequency, None };

// InverseFrequency: w_c = N / (K * n_c), N = total records, K = 4 conditions.
// Throws UndefinedError when some n_c is zero.
std::array<double, kConditionCount> class_weights(const PrevalenceTable& table, WeightScheme scheme);

} // namespace radlabel
