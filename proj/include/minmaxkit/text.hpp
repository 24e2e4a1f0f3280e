#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace minmax {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a full string as a double; throws ConfigParse on failure.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace minmax
