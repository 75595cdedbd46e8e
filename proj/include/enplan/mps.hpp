#pragma once

#include "enplan/lp_problem.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace enplan {

struct MpsNameTable {
    std::map<std::string, std::string> rows;    ///< MPS name → full name
    std::map<std::string, std::string> columns; ///< MPS name → full name

    /// Reads the CSV written by MpsNameMap::to_csv.
    static MpsNameTable parse_csv(std::istream& in);
};

/// Reversible correspondence between fixed-format MPS names (≤ 8 chars) and
/// the problem's full row/column names.
///
/// Names that already fit (≤ 8 printable chars, no spaces) are kept. Longer
/// names are replaced, in index order, by `C` or `R` followed by seven base-36
/// digits of a counter; counter values whose name is already taken are skipped.
struct MpsNameMap {
    std::vector<std::string> column_names; ///< MPS name per column index
    std::vector<std::string> row_names;    ///< MPS name per row index

    static MpsNameMap build(const LpProblem& problem);
    /// Mapping table written next to the MPS file: kind,mps_name,full_name.
    std::string to_csv(const LpProblem& problem) const;
    MpsNameTable table(const LpProblem& problem) const;
};

struct MpsExport {
    std::string text;
    MpsNameMap names;
};

/// Fixed-format MPS with objective row COST. Numbers use the shortest text that
/// round-trips when it fits the 12-character field, and 12 significant
/// characters otherwise.
MpsExport export_mps(const LpProblem& problem);

/// Formats a number into at most 12 characters.
std::string format_mps_number(double value);

/// Reads fixed- or free-format MPS (names without spaces). When `full_names` is
/// given the original names are restored.
LpProblem read_mps(std::istream& in, const MpsNameTable* full_names = nullptr);

/// Reads a solution CSV with header `name,value`; names may be full or MPS names.
/// Optional rows `__status__,<status>` and `__objective__,<value>` are honoured.
/// Columns absent from the file are zero; unknown names or malformed lines are
/// rejected with their line number.
LpSolution import_solution(std::istream& in, const LpProblem& problem,
                           const MpsNameMap* names = nullptr);

/// Writes `solution` in the format import_solution reads.
void write_solution_csv(std::ostream& out, const LpProblem& problem, const LpSolution& solution);

} // namespace enplan
