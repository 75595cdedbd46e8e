#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enplan::csv {

/// A parsed CSV table with a mandatory header row.
///
/// Fields may be quoted with `"`; embedded quotes are doubled. Blank lines are
/// skipped. Every data row must have exactly as many fields as the header.
class Table {
public:
    static Table parse(std::istream& in, const std::string& source_name);
    static Table read(const std::filesystem::path& path);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }

    /// Index of `column`, or nullopt when absent.
    std::optional<std::size_t> column(std::string_view name) const;

    /// Throws if the header contains a name outside `allowed` or lacks one of `required`.
    void require_columns(const std::vector<std::string>& required,
                         const std::vector<std::string>& allowed) const;

    /// Field accessors. `row` is zero-based over data rows. Missing optional
    /// columns read as empty strings.
    const std::string& get(std::size_t row, std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
    std::optional<double> optional_number(std::size_t row, std::string_view name) const;

    /// Source line of a data row, for diagnostics.
    std::size_t line_of(std::size_t row) const { return lines_[row]; }
    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> lines_;
};

/// Splits one CSV record. Throws on an unterminated quote.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it contains a separator, quote or newline.
std::string escape(std::string_view field);

/// Writes `fields` as one comma-separated record terminated by '\n'.
void write_record(std::ostream& out, const std::vector<std::string>& fields);

/// Parses a decimal number; the whole string must be consumed.
double parse_double(std::string_view text, const std::string& context);

/// Shortest "%.17g"-style text that round-trips to the same double.
std::string format_exact(double value);

/// Fixed-point decimal with `significant` significant digits, no exponent.
/// Magnitudes below 1e-12 print as "0".
std::string format_significant(double value, int significant = 6);

} // namespace enplan::csv
