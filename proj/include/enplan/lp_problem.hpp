#pragma once

#include <limits>
#include <string>
#include <vector>

namespace enplan {

enum class RowSense { less_equal, equal, greater_equal };

struct LpColumn {
    std::string name;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    double cost = 0.0;
};

struct LpRow {
    std::string name;
    RowSense sense = RowSense::less_equal;
    double rhs = 0.0;
};

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Compressed sparse column view of a constraint matrix.
struct SparseColumns {
    int rows = 0;
    int cols = 0;
    std::vector<int> start; ///< cols + 1 entries
    std::vector<int> index;
    std::vector<double> value;
};

/// Sparse LP: minimise Σ cost·x subject to row constraints and column bounds.
///
/// Coefficients are accumulated as triplets; repeated (row, col) pairs are
/// summed by compress(), so the compressed matrix never holds duplicates.
class LpProblem {
public:
    int add_column(std::string name, double lower, double upper, double cost);
    int add_row(std::string name, RowSense sense, double rhs);
    void add_coefficient(int row, int col, double value);

    int num_columns() const { return static_cast<int>(columns_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }

    const std::vector<LpColumn>& columns() const { return columns_; }
    const std::vector<LpRow>& rows() const { return rows_; }
    const std::vector<Triplet>& entries() const { return entries_; }

    LpColumn& column(int j) { return columns_.at(static_cast<std::size_t>(j)); }
    const LpColumn& column(int j) const { return columns_.at(static_cast<std::size_t>(j)); }
    LpRow& row(int i) { return rows_.at(static_cast<std::size_t>(i)); }
    const LpRow& row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }

    void set_bounds(int col, double lower, double upper);

    /// CSC matrix with duplicates merged and explicit zeros dropped;
    /// row indices ascending within each column.
    SparseColumns compress() const;

    /// Number of stored nonzero coefficients after merging duplicates.
    std::size_t nonzeros() const;

    /// Empty when structurally valid; otherwise one message per problem found.
    std::vector<std::string> structural_errors() const;

    /// Constant added to the objective (kept out of the matrix).
    double objective_offset = 0.0;
    /// Currency units per objective unit, e.g. 1e6 when costs are in M€.
    double objective_unit = 1.0;

private:
    std::vector<LpColumn> columns_;
    std::vector<LpRow> rows_;
    std::vector<Triplet> entries_;
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(SolveStatus status);

struct LpSolution {
    SolveStatus status = SolveStatus::iteration_limit;
    double objective = 0.0; ///< in problem objective units, including the offset
    std::vector<double> primal;
    std::vector<double> row_activity;
    /// Row multipliers y with L = c·x − y·(Ax − b): y ≥ 0 on binding ≥ rows, y ≤ 0 on ≤ rows.
    std::vector<double> duals;
    std::vector<double> reduced_costs;
    long iterations = 0;
    double wall_seconds = 0.0;
    std::string message;
};

/// Residuals of a candidate solution, recomputed from the problem data alone.
struct SolutionCheck {
    double primal_residual = 0.0;  ///< max row/bound violation relative to 1 + |rhs|
    double dual_residual = 0.0;    ///< max wrong-signed reduced cost or row dual
    double complementarity = 0.0;  ///< Σ|slack·multiplier| relative to 1 + |objective|
    double primal_objective = 0.0;
    double dual_objective = 0.0;
};

SolutionCheck check_solution(const LpProblem& problem, const LpSolution& solution);

} // namespace enplan
