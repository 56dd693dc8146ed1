#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace radlabel::csv {

// RFC 4180 reader: quoted fields, doubled quotes, LF or CRLF records.
std::vector<std::vector<std::string>> parse(std::string_view body);

// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

} // namespace radlabel::csv
