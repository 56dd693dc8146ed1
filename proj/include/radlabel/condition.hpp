#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace radlabel {

// Column order of the labels CSV and of the binary encoding.
enum class Condition { NoFinding = 0, Pneumonia = 1, Pneumothorax = 2, PleuralEffusion = 3 };

inline constexpr std::size_t kConditionCount = 4;

inline constexpr std::array<Condition, kConditionCount> kAllConditions = {
    Condition::NoFinding, Condition::Pneumonia, Condition::Pneumothorax, Condition::PleuralEffusion};

inline constexpr std::array<Condition, 3> kDiseaseConditions = {
    Condition::Pneumonia, Condition::Pneumothorax, Condition::PleuralEffusion};

inline constexpr std::size_t index_of(Condition c) { return static_cast<std::size_t>(c); }

// Display name used in CSV headers and plan files ("Pleural Effusion").
std::string_view condition_name(Condition c);

// Accepts display names and identifiers (PLEURAL_EFFUSION, EFFUSION), case-insensitive.
std::optional<Condition> parse_condition(std::string_view s);

} // namespace radlabel
