#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bayeskit::cli {

// Single numeric column with an optional header line. A file holding one data
// line may list its values separated by commas; otherwise each line holds one
// value. Decimal points are parsed independently of the locale.
std::vector<double> parse_single_column(std::string_view text);
std::vector<double> read_single_column(const std::string& path);

// Rows of comma-separated fields, blank lines skipped.
std::vector<std::vector<std::string>> parse_rows(std::string_view text);

bool parse_double(std::string_view field, double& out);
std::string read_file(const std::string& path);

}  // namespace bayeskit::cli
