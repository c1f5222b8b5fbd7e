#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nql {

using KeyValueList = std::vector<std::pair<std::string, std::string>>;

/// Parses flat `key = value` lines. Blank lines and `#` comments are skipped;
/// a repeated key or a line without '=' is an InvalidConfig error.
KeyValueList parse_key_values(std::string_view text);

double parse_real(std::string_view key, std::string_view value);
long long parse_integer(std::string_view key, std::string_view value);
std::vector<double> parse_real_list(std::string_view key, std::string_view value);

}  // namespace nql
