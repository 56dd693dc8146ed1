#include "radlabel/condition.hpp"

#include "radlabel/text.hpp"

namespace radlabel {

std::string_view condition_name(Condition c) {
    switch (c) {
    case Condition::NoFinding: return "No Finding";
    case Condition::Pneumonia: return "Pneumonia";
    case Condition::Pneumothorax: return "Pneumothorax";
    case Condition::PleuralEffusion: return "Pleural Effusion";
    }
    return "";
}

std::optional<Condition> parse_condition(std::string_view s) {
    auto f = text::fold_case(text::trim(s));
    if (f == "no finding" || f == "no_finding") return Condition::NoFinding;
    if (f == "pneumonia") return Condition::Pneumonia;
    if (f == "pneumothorax") return Condition::Pneumothorax;
    if (f == "pleural effusion" || f == "pleural_effusion" || f == "effusion") return Condition::PleuralEffusion;
    return std::nullopt;
}

} // namespace radlabel
