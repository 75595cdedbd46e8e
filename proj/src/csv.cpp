#include "enplan/csv.hpp"

#include "enplan/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace enplan::csv {

std::vector<std::string> split_record(std::string_view line)
{
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    if (quoted) {
        throw Error("unterminated quoted field");
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string escape(std::string_view field)
{
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') {
            out += "\"\"";
        } else {
            out.push_back(ch);
        }
    }
    out.push_back('"');
    return out;
}

void write_record(std::ostream& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << escape(fields[i]);
    }
    out << '\n';
}

double parse_double(std::string_view text, const std::string& context)
{
    std::string_view trimmed = text;
    while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t')) {
        trimmed.remove_prefix(1);
    }
    while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t')) {
        trimmed.remove_suffix(1);
    }
    if (trimmed == "inf" || trimmed == "+inf" || trimmed == "Infinity") {
        return HUGE_VAL;
    }
    if (trimmed == "-inf" || trimmed == "-Infinity") {
        return -HUGE_VAL;
    }
    if (!trimmed.empty() && trimmed.front() == '+') {
        trimmed.remove_prefix(1);
    }
    double value = 0.0;
    const auto* first = trimmed.data();
    const auto* last = trimmed.data() + trimmed.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (trimmed.empty() || ec != std::errc() || ptr != last) {
        throw Error(context + ": not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::string format_exact(double value)
{
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

std::string format_significant(double value, int significant)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (std::fabs(value) < 1e-12) {
        return "0";
    }
    const int exponent = static_cast<int>(std::floor(std::log10(std::fabs(value))));
    const int decimals = std::max(0, significant - 1 - exponent);
    char buffer[128];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

Table Table::parse(std::istream& in, const std::string& source_name)
{
    Table table;
    table.source_ = source_name;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::vector<std::string> fields;
        try {
            fields = split_record(line);
        } catch (const Error& e) {
            throw Error(source_name + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!have_header) {
            table.header_ = std::move(fields);
            have_header = true;
            for (std::size_t i = 0; i < table.header_.size(); ++i) {
                for (std::size_t j = 0; j < i; ++j) {
                    if (table.header_[i] == table.header_[j]) {
                        throw Error(source_name + ": duplicate column '" + table.header_[i] + "'");
                    }
                }
            }
            continue;
        }
        if (fields.size() != table.header_.size()) {
            throw Error(source_name + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(table.header_.size()) + " fields, found " +
                        std::to_string(fields.size()));
        }
        table.rows_.push_back(std::move(fields));
        table.lines_.push_back(line_no);
    }
    if (!have_header) {
        throw Error(source_name + ": missing header row");
    }
    return table;
}

Table Table::read(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return parse(in, path.string());
}

std::optional<std::size_t> Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

void Table::require_columns(const std::vector<std::string>& required,
                            const std::vector<std::string>& allowed) const
{
    for (const auto& name : header_) {
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            throw Error(source_ + ": unknown column '" + name + "'");
        }
    }
    for (const auto& name : required) {
        if (!column(name)) {
            throw Error(source_ + ": missing required column '" + name + "'");
        }
    }
}

const std::string& Table::get(std::size_t row, std::string_view name) const
{
    static const std::string empty;
    auto idx = column(name);
    if (!idx) {
        return empty;
    }
    return rows_.at(row)[*idx];
}

double Table::number(std::size_t row, std::string_view name) const
{
    const auto& text = get(row, name);
    return parse_double(text, source_ + ":" + std::to_string(lines_[row]) + " column " +
                                  std::string(name));
}

std::optional<double> Table::optional_number(std::size_t row, std::string_view name) const
{
    const auto& text = get(row, name);
    if (text.find_first_not_of(" \t") == std::string::npos) {
        return std::nullopt;
    }
    return number(row, name);
}

} // namespace enplan::csv
