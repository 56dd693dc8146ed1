#pragma once

#include <string>

#include "radlabel/text.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(RL_FIXTURE_DIR) + "/" + name; }
inline std::string read(const std::string& name) { return radlabel::text::read_file(path(name)); }

} // namespace fixtures
