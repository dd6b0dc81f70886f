#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gameruns::textio {

/// Shortest representation that parses back to the same double.
std::string format_number(double value);
std::string format_fixed(double value, int decimals);

/// Splits one CSV line. Double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(std::string_view line);

std::string_view trim(std::string_view text);

bool parse_int(std::string_view text, int& out);
bool parse_int64(std::string_view text, long long& out);
bool parse_double(std::string_view text, double& out);

/// Writes `contents` to a sibling temporary and renames it over `path`.
void write_file_atomically(const std::string& path, std::string_view contents);

}  // namespace gameruns::textio
