#pragma once

#include <string_view>

// Shipped data files compiled into the library (generated at configure time).
namespace radlabel::embedded {
extern const std::string_view default_lexicon;
extern const std::string_view abbreviations;
extern const std::string_view verbs;
} // namespace radlabel::embedded
