#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eulerpose {

/// Splits on runs of spaces, tabs, CR and LF.
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Splits on every `sep`; empty fields are kept.
std::vector<std::string_view> split_on(std::string_view s, char sep);

/// Full-token decimal parse (optional leading '+'); nullopt on any trailing junk.
/// Non-finite spellings ("nan", "inf") parse and are left to the caller to reject.
std::optional<double> parse_double(std::string_view token);

/// Shortest text that reads back to the same double, never more than 17
/// significant digits.
std::string format_double(double v);

std::string_view trim(std::string_view s);

} // namespace eulerpose
