#include "bayeskit/cli/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bayeskit/cli/errors.hpp"

namespace bayeskit::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return false;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<double> parse_single_column(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t number = 0;
    for (std::string_view line : split(text, '\n')) {
        ++number;
        if (!trim(line).empty()) lines.emplace_back(number, trim(line));
    }
    if (!lines.empty()) {
        double probe;
        const auto first_fields = split(lines.front().second, ',');
        if (!parse_double(first_fields.front(), probe)) lines.erase(lines.begin());  // header
    }
    std::vector<double> out;
    for (const auto& [line_no, line] : lines) {
        const auto fields = split(line, ',');
        if (fields.size() > 1 && lines.size() > 1) {
            throw InputError("data line " + std::to_string(line_no) + ": expected single column, found " +
                             std::to_string(fields.size()) + " fields");
        }
        for (std::string_view f : fields) {
            if (f.empty() && fields.size() > 1) continue;
            double v;
            if (!parse_double(f, v)) {
                throw InputError("data line " + std::to_string(line_no) + ": '" + std::string(f) +
                                 "' is not a number");
            }
            out.push_back(v);
        }
    }
    return out;
}

std::vector<double> read_single_column(const std::string& path) {
    try {
        return parse_single_column(read_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::vector<std::vector<std::string>> parse_rows(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    for (std::string_view line : split(text, '\n')) {
        if (trim(line).empty()) continue;
        std::vector<std::string> row;
        for (std::string_view f : split(line, ',')) row.emplace_back(f);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace bayeskit::cli
