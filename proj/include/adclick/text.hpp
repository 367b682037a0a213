#pragma once
// Small text helpers shared by parsing, serialization, and report writers.

#include <string>
#include <string_view>
#include <vector>

namespace adclick {

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);

// Splits on a single character; keeps empty fields.
std::vector<std::string> split(std::string_view s, char sep);

// Splits on runs of whitespace; drops empty fields.
std::vector<std::string> split_ws(std::string_view s);

std::string join(const std::vector<std::string>& parts, char sep);

// Fixed-format doubles so identical inputs always reproduce identical bytes.
// g17 round-trips any double exactly; g10 is the compact report format.
std::string fmt_g17(double v);
std::string fmt_g10(double v);

bool parse_u64(std::string_view s, unsigned long long& out);
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, int& out);

} // namespace adclick
