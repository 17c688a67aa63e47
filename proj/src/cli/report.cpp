#include "bayeskit/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <charconv>

#include "json.hpp"

namespace bayeskit::cli {
namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string value_text(const Value& v, int precision) {
    if (const auto* d = std::get_if<double>(&v)) return format_number(*d, precision);
    return std::get<std::string>(v);
}

std::string render_text(const Report& r, int precision, bool quiet) {
    std::string out;
    if (!quiet) {
        out += "# " + r.command;
        if (!r.title.empty()) out += ": " + r.title;
        out += '\n';
    }
    std::size_t i = 0;
    while (i < r.rows.size()) {
        const std::string& section = r.rows[i].section;
        std::size_t j = i;
        std::size_t width = 0;
        while (j < r.rows.size() && r.rows[j].section == section) {
            width = std::max(width, r.rows[j].key.size());
            ++j;
        }
        out += "[" + section + "]\n";
        for (std::size_t k = i; k < j; ++k) {
            const Row& row = r.rows[k];
            out += "  " + row.key + ":" + std::string(width - row.key.size() + 1, ' ') +
                   value_text(row.value, precision) + '\n';
        }
        i = j;
    }
    if (!quiet) {
        for (const std::string& n : r.notes) out += "note: " + n + '\n';
    }
    return out;
}

std::string render_csv(const Report& r, int precision) {
    std::string out = "section,key,value\n";
    for (const Row& row : r.rows) {
        out += csv_field(row.section) + ',' + csv_field(row.key) + ',' +
               csv_field(value_text(row.value, precision)) + '\n';
    }
    return out;
}

std::string render_json(const Report& r, int precision) {
    nlohmann::ordered_json doc;
    doc["command"] = r.command;
    if (!r.title.empty()) doc["title"] = r.title;
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    for (const Row& row : r.rows) {
        nlohmann::ordered_json& section = results[row.section];
        if (const auto* d = std::get_if<double>(&row.value)) {
            // Emit the rounded value so every format carries the same digits.
            const std::string text = format_number(*d, precision);
            double rounded = 0.0;
            const auto res = std::from_chars(text.data(), text.data() + text.size(), rounded);
            if (std::isfinite(*d) && res.ec == std::errc()) section[row.key] = rounded;
            else section[row.key] = text;
        } else {
            section[row.key] = std::get<std::string>(row.value);
        }
    }
    doc["results"] = std::move(results);
    return doc.dump(2) + '\n';
}

}  // namespace

std::string format_number(double value, int precision) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    precision = std::clamp(precision, 0, 17);
    // Rounding residue from cancelling terms prints as zero.
    if (std::abs(value) < 1e-14) value = 0.0;
    char buf[64];
    const double threshold = std::pow(10.0, -precision);
    if (value != 0.0 && std::abs(value) < threshold) {
        std::snprintf(buf, sizeof buf, "%.*e", std::max(0, precision - 1), value);
    } else {
        std::snprintf(buf, sizeof buf, "%.*f", precision, value);
    }
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string render(const Report& report, Format format, int precision, bool quiet) {
    switch (format) {
        case Format::Text: return render_text(report, precision, quiet);
        case Format::Csv: return render_csv(report, precision);
        case Format::Json: return render_json(report, precision);
    }
    return {};
}

}  // namespace bayeskit::cli
