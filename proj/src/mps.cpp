#include "enplan/mps.hpp"

#include "enplan/csv.hpp"
#include "enplan/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace enplan {

namespace {

constexpr const char* kObjectiveRow = "COST";
constexpr std::size_t kNameWidth = 8;
constexpr std::size_t kNumberWidth = 12;

bool fits(const std::string& name)
{
    if (name.empty() || name.size() > kNameWidth || name == kObjectiveRow) {
        return false;
    }
    for (char ch : name) {
        if (ch <= ' ' || ch > '~' || ch == ',' || ch == '"') {
            return false;
        }
    }
    return true;
}

std::string base36(long value)
{
    static const char* digits = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    std::string out(7, '0');
    for (int i = 6; i >= 0 && value > 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value % 36];
        value /= 36;
    }
    if (value > 0) {
        throw Error("MPS name counter overflow");
    }
    return out;
}

std::vector<std::string> mangle(const std::vector<std::string>& full, char prefix,
                                const std::set<std::string>& taken)
{
    std::vector<std::string> out(full.size());
    long counter = 0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (fits(full[i])) {
            out[i] = full[i];
            continue;
        }
        std::string candidate;
        do {
            candidate = prefix + base36(counter++);
        } while (taken.count(candidate) != 0);
        out[i] = candidate;
    }
    return out;
}

std::string pad(const std::string& text, std::size_t width)
{
    std::string out = text;
    if (out.size() < width) {
        out.append(width - out.size(), ' ');
    }
    return out;
}

/// Fixed-format data line: fields start at columns 2, 5, 15, 25, 40, 50.
std::string data_line(const std::string& f1, const std::string& f2, const std::string& f3,
                      const std::string& f4, const std::string& f5 = {}, const std::string& f6 = {})
{
    std::string line = " " + pad(f1, 2) + " " + pad(f2, 8) + "  " + pad(f3, 8) + "  ";
    if (f5.empty()) {
        line += f4;
    } else {
        line += pad(f4, 12) + "   " + pad(f5, 8) + "  " + f6;
    }
    while (!line.empty() && line.back() == ' ') {
        line.pop_back();
    }
    return line;
}

std::vector<std::string> tokens(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

double number_at(const std::string& text, std::size_t line_no)
{
    return csv::parse_double(text, "MPS line " + std::to_string(line_no));
}

} // namespace

MpsNameMap MpsNameMap::build(const LpProblem& problem)
{
    std::vector<std::string> cols;
    std::vector<std::string> rows;
    cols.reserve(static_cast<std::size_t>(problem.num_columns()));
    rows.reserve(static_cast<std::size_t>(problem.num_rows()));
    for (const auto& c : problem.columns()) {
        cols.push_back(c.name);
    }
    for (const auto& r : problem.rows()) {
        rows.push_back(r.name);
    }
    std::set<std::string> taken_cols;
    std::set<std::string> taken_rows;
    for (const auto& name : cols) {
        if (fits(name)) {
            if (!taken_cols.insert(name).second) {
                throw Error("MPS export: duplicate column name '" + name + "'");
            }
        }
    }
    for (const auto& name : rows) {
        if (fits(name)) {
            if (!taken_rows.insert(name).second) {
                throw Error("MPS export: duplicate row name '" + name + "'");
            }
        }
    }
    MpsNameMap map;
    map.column_names = mangle(cols, 'C', taken_cols);
    map.row_names = mangle(rows, 'R', taken_rows);
    return map;
}

std::string MpsNameMap::to_csv(const LpProblem& problem) const
{
    std::ostringstream out;
    csv::write_record(out, {"kind", "mps_name", "full_name"});
    for (std::size_t i = 0; i < row_names.size(); ++i) {
        csv::write_record(out, {"row", row_names[i], problem.rows()[i].name});
    }
    for (std::size_t j = 0; j < column_names.size(); ++j) {
        csv::write_record(out, {"column", column_names[j], problem.columns()[j].name});
    }
    return out.str();
}

MpsNameTable MpsNameMap::table(const LpProblem& problem) const
{
    MpsNameTable t;
    for (std::size_t i = 0; i < row_names.size(); ++i) {
        t.rows[row_names[i]] = problem.rows()[i].name;
    }
    for (std::size_t j = 0; j < column_names.size(); ++j) {
        t.columns[column_names[j]] = problem.columns()[j].name;
    }
    return t;
}

MpsNameTable MpsNameTable::parse_csv(std::istream& in)
{
    auto table = csv::Table::parse(in, "MPS name map");
    table.require_columns({"kind", "mps_name", "full_name"}, {"kind", "mps_name", "full_name"});
    MpsNameTable out;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const auto& kind = table.get(r, "kind");
        auto& target = kind == "row" ? out.rows : out.columns;
        if (kind != "row" && kind != "column") {
            throw Error("MPS name map line " + std::to_string(table.line_of(r)) + ": unknown kind '" +
                        kind + "'");
        }
        target[table.get(r, "mps_name")] = table.get(r, "full_name");
    }
    return out;
}

std::string format_mps_number(double value)
{
    if (!std::isfinite(value)) {
        return value > 0 ? "1e+30" : "-1e+30";
    }
    std::string exact = csv::format_exact(value);
    if (exact.size() <= kNumberWidth) {
        return exact;
    }
    for (int precision = 12; precision >= 1; --precision) {
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
        if (std::string(buffer).size() <= kNumberWidth) {
            return buffer;
        }
    }
    throw Error("cannot format " + exact + " into an MPS field");
}

MpsExport export_mps(const LpProblem& problem)
{
    MpsExport out;
    out.names = MpsNameMap::build(problem);
    const auto& cn = out.names.column_names;
    const auto& rn = out.names.row_names;
    std::ostringstream mps;
    mps << "NAME          ENPLAN\n";
    mps << "ROWS\n";
    mps << " N  " << kObjectiveRow << '\n';
    for (int i = 0; i < problem.num_rows(); ++i) {
        const char* kind = "L";
        switch (problem.row(i).sense) {
        case RowSense::less_equal:
            kind = "L";
            break;
        case RowSense::greater_equal:
            kind = "G";
            break;
        case RowSense::equal:
            kind = "E";
            break;
        }
        mps << " " << kind << "  " << rn[static_cast<std::size_t>(i)] << '\n';
    }
    mps << "COLUMNS\n";
    const SparseColumns a = problem.compress();
    for (int j = 0; j < problem.num_columns(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        std::vector<std::pair<std::string, double>> entries;
        entries.emplace_back(kObjectiveRow, problem.column(j).cost);
        for (int k = a.start[jj]; k < a.start[jj + 1]; ++k) {
            entries.emplace_back(rn[static_cast<std::size_t>(a.index[static_cast<std::size_t>(k)])],
                                 a.value[static_cast<std::size_t>(k)]);
        }
        for (std::size_t e = 0; e < entries.size(); e += 2) {
            if (e + 1 < entries.size()) {
                mps << data_line("", cn[jj], entries[e].first, format_mps_number(entries[e].second),
                                 entries[e + 1].first, format_mps_number(entries[e + 1].second))
                    << '\n';
            } else {
                mps << data_line("", cn[jj], entries[e].first, format_mps_number(entries[e].second))
                    << '\n';
            }
        }
    }
    mps << "RHS\n";
    if (problem.objective_offset != 0.0) {
        mps << data_line("", "RHS", kObjectiveRow, format_mps_number(-problem.objective_offset)) << '\n';
    }
    for (int i = 0; i < problem.num_rows(); ++i) {
        if (problem.row(i).rhs != 0.0) {
            mps << data_line("", "RHS", rn[static_cast<std::size_t>(i)],
                             format_mps_number(problem.row(i).rhs))
                << '\n';
        }
    }
    mps << "BOUNDS\n";
    for (int j = 0; j < problem.num_columns(); ++j) {
        const auto& c = problem.column(j);
        const auto& name = cn[static_cast<std::size_t>(j)];
        const bool lo_inf = std::isinf(c.lower);
        const bool up_inf = std::isinf(c.upper);
        if (!lo_inf && !up_inf && c.lower == c.upper) {
            mps << data_line("FX", "BND", name, format_mps_number(c.lower)) << '\n';
            continue;
        }
        if (lo_inf && up_inf) {
            mps << data_line("FR", "BND", name, "") << '\n';
            continue;
        }
        if (lo_inf) {
            mps << data_line("MI", "BND", name, "") << '\n';
        } else if (c.lower != 0.0 || (!up_inf && c.upper < 0.0)) {
            mps << data_line("LO", "BND", name, format_mps_number(c.lower)) << '\n';
        }
        if (!up_inf) {
            mps << data_line("UP", "BND", name, format_mps_number(c.upper)) << '\n';
        }
    }
    mps << "ENDATA\n";
    out.text = mps.str();
    return out;
}

LpProblem read_mps(std::istream& in, const MpsNameTable* full_names)
{
    enum class Section { none, name, rows, columns, rhs, ranges, bounds, done };
    Section section = Section::none;
    LpProblem problem;
    std::string objective_name;
    std::unordered_map<std::string, int> row_index;
    std::unordered_map<std::string, int> col_index;
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& what) {
        throw Error("MPS line " + std::to_string(line_no) + ": " + what);
    };
    auto row_of = [&](const std::string& name) -> int {
        auto it = row_index.find(name);
        if (it == row_index.end()) {
            fail("unknown row '" + name + "'");
        }
        return it->second;
    };
    auto col_of = [&](const std::string& name) -> int {
        auto it = col_index.find(name);
        if (it == col_index.end()) {
            fail("unknown column '" + name + "'");
        }
        return it->second;
    };
    auto restore = [](const std::map<std::string, std::string>* table, const std::string& name) {
        if (table == nullptr) {
            return name;
        }
        auto it = table->find(name);
        return it == table->end() ? name : it->second;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '*') {
            continue;
        }
        auto tok = tokens(line);
        if (tok.empty()) {
            continue;
        }
        if (line[0] != ' ' && line[0] != '\t') {
            const std::string& head = tok[0];
            if (head == "NAME") {
                section = Section::name;
            } else if (head == "ROWS") {
                section = Section::rows;
            } else if (head == "COLUMNS") {
                section = Section::columns;
            } else if (head == "RHS") {
                section = Section::rhs;
            } else if (head == "RANGES") {
                section = Section::ranges;
            } else if (head == "BOUNDS") {
                section = Section::bounds;
            } else if (head == "ENDATA") {
                section = Section::done;
                break;
            } else if (head == "OBJSENSE") {
                if (tok.size() > 1 && tok[1] != "MIN" && tok[1] != "MINIMIZE") {
                    fail("only minimisation is supported");
                }
            } else {
                fail("unknown section '" + head + "'");
            }
            continue;
        }
        switch (section) {
        case Section::rows: {
            if (tok.size() != 2) {
                fail("expected row type and name");
            }
            const std::string& type = tok[0];
            if (type == "N") {
                if (objective_name.empty()) {
                    objective_name = tok[1];
                }
                continue;
            }
            RowSense sense;
            if (type == "L") {
                sense = RowSense::less_equal;
            } else if (type == "G") {
                sense = RowSense::greater_equal;
            } else if (type == "E") {
                sense = RowSense::equal;
            } else {
                fail("unknown row type '" + type + "'");
            }
            if (row_index.count(tok[1]) != 0) {
                fail("duplicate row '" + tok[1] + "'");
            }
            row_index[tok[1]] = problem.add_row(
                restore(full_names ? &full_names->rows : nullptr, tok[1]), sense, 0.0);
            break;
        }
        case Section::columns: {
            if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                fail("integer markers are not supported");
            }
            if (tok.size() != 3 && tok.size() != 5) {
                fail("expected column, row, value [row, value]");
            }
            int col;
            if (auto it = col_index.find(tok[0]); it != col_index.end()) {
                col = it->second;
            } else {
                col = problem.add_column(restore(full_names ? &full_names->columns : nullptr, tok[0]),
                                         0.0, HUGE_VAL, 0.0);
                col_index[tok[0]] = col;
            }
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                const double value = number_at(tok[k + 1], line_no);
                if (tok[k] == objective_name) {
                    problem.column(col).cost += value;
                } else {
                    problem.add_coefficient(row_of(tok[k]), col, value);
                }
            }
            break;
        }
        case Section::rhs: {
            const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
            for (std::size_t k = first; k + 1 < tok.size(); k += 2) {
                const double value = number_at(tok[k + 1], line_no);
                if (tok[k] == objective_name) {
                    problem.objective_offset = -value;
                } else {
                    problem.row(row_of(tok[k])).rhs = value;
                }
            }
            break;
        }
        case Section::ranges:
            fail("RANGES are not supported");
            break;
        case Section::bounds: {
            const std::string& type = tok[0];
            const bool valueless = type == "FR" || type == "MI" || type == "PL";
            std::string name;
            double value = 0.0;
            if (valueless) {
                if (tok.size() != 2 && tok.size() != 3) {
                    fail("malformed bound");
                }
                name = tok.back();
            } else {
                if (tok.size() != 3 && tok.size() != 4) {
                    fail("malformed bound");
                }
                name = tok[tok.size() - 2];
                value = number_at(tok.back(), line_no);
                if (std::fabs(value) >= 1e30) {
                    value = value > 0 ? HUGE_VAL : -HUGE_VAL;
                }
            }
            auto& c = problem.column(col_of(name));
            if (type == "UP") {
                c.upper = value;
            } else if (type == "LO") {
                c.lower = value;
            } else if (type == "FX") {
                c.lower = value;
                c.upper = value;
            } else if (type == "FR") {
                c.lower = -HUGE_VAL;
                c.upper = HUGE_VAL;
            } else if (type == "MI") {
                c.lower = -HUGE_VAL;
            } else if (type == "PL") {
                c.upper = HUGE_VAL;
            } else {
                fail("unsupported bound type '" + type + "'");
            }
            break;
        }
        default:
            fail("data outside a section");
        }
    }
    if (section != Section::done) {
        throw Error("MPS: missing ENDATA");
    }
    return problem;
}

LpSolution import_solution(std::istream& in, const LpProblem& problem, const MpsNameMap* names)
{
    auto table = csv::Table::parse(in, "solution");
    table.require_columns({"name", "value"}, {"name", "value"});
    std::unordered_map<std::string, int> index;
    for (int j = 0; j < problem.num_columns(); ++j) {
        index[problem.column(j).name] = j;
        if (names != nullptr) {
            index[names->column_names.at(static_cast<std::size_t>(j))] = j;
        }
    }
    LpSolution sol;
    sol.status = SolveStatus::optimal;
    sol.primal.assign(static_cast<std::size_t>(problem.num_columns()), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(problem.num_columns()), 0);
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const std::string where = "solution line " + std::to_string(table.line_of(r));
        const auto& name = table.get(r, "name");
        const auto& value = table.get(r, "value");
        if (name == "__status__") {
            if (value == "optimal") {
                sol.status = SolveStatus::optimal;
            } else if (value == "infeasible") {
                sol.status = SolveStatus::infeasible;
            } else if (value == "unbounded") {
                sol.status = SolveStatus::unbounded;
            } else if (value == "iteration-limit") {
                sol.status = SolveStatus::iteration_limit;
            } else {
                throw Error(where + ": unknown status '" + value + "'");
            }
            continue;
        }
        if (name == "__objective__") {
            csv::parse_double(value, where);
            continue;
        }
        auto it = index.find(name);
        if (it == index.end()) {
            throw Error(where + ": unknown column '" + name + "'");
        }
        const auto j = static_cast<std::size_t>(it->second);
        if (seen[j]) {
            throw Error(where + ": column '" + name + "' listed twice");
        }
        seen[j] = 1;
        sol.primal[j] = csv::parse_double(value, where);
    }
    const SparseColumns a = problem.compress();
    sol.row_activity.assign(static_cast<std::size_t>(problem.num_rows()), 0.0);
    double objective = problem.objective_offset;
    for (int j = 0; j < problem.num_columns(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        objective += problem.column(j).cost * sol.primal[jj];
        for (int k = a.start[jj]; k < a.start[jj + 1]; ++k) {
            sol.row_activity[static_cast<std::size_t>(a.index[static_cast<std::size_t>(k)])] +=
                a.value[static_cast<std::size_t>(k)] * sol.primal[jj];
        }
    }
    sol.objective = objective;
    sol.message = "imported";
    return sol;
}

void write_solution_csv(std::ostream& out, const LpProblem& problem, const LpSolution& solution)
{
    csv::write_record(out, {"name", "value"});
    csv::write_record(out, {"__status__", std::string(to_string(solution.status))});
    csv::write_record(out, {"__objective__", csv::format_exact(solution.objective)});
    for (int j = 0; j < problem.num_columns(); ++j) {
        csv::write_record(out, {problem.column(j).name,
                                csv::format_exact(solution.primal.at(static_cast<std::size_t>(j)))});
    }
}

} // namespace enplan
