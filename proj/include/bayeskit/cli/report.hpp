#pragma once

#include <string>
#include <variant>
#include <vector>

namespace bayeskit::cli {

enum class Format { Text, Csv, Json };

using Value = std::variant<double, std::string>;

struct Row {
    std::string section;
    std::string key;
    Value value;
};

// Ordered result rows shared by every output format.
struct Report {
    std::string command;
    std::string title;
    std::vector<Row> rows;
    std::vector<std::string> notes;  // free-text remarks; text format only, hidden by --quiet

    void add(const std::string& section, const std::string& key, double value) {
        rows.push_back({section, key, value});
    }
    void add(const std::string& section, const std::string& key, std::string value) {
        rows.push_back({section, key, std::move(value)});
    }
};

// Fixed-point with `precision` decimals; magnitudes too small to show switch to
// scientific notation with the same number of significant digits. Magnitudes
// below 1e-14 print as zero.
std::string format_number(double value, int precision);

std::string render(const Report& report, Format format, int precision, bool quiet);

}  // namespace bayeskit::cli
