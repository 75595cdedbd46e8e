#include "enplan/lp_problem.hpp"

#include "enplan/error.hpp"

#include <algorithm>
#include <cmath>

namespace enplan {

std::string_view to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::optimal:
        return "optimal";
    case SolveStatus::infeasible:
        return "infeasible";
    case SolveStatus::unbounded:
        return "unbounded";
    case SolveStatus::iteration_limit:
        return "iteration-limit";
    }
    return "?";
}

int LpProblem::add_column(std::string name, double lower, double upper, double cost)
{
    columns_.push_back({std::move(name), lower, upper, cost});
    return static_cast<int>(columns_.size()) - 1;
}

int LpProblem::add_row(std::string name, RowSense sense, double rhs)
{
    rows_.push_back({std::move(name), sense, rhs});
    return static_cast<int>(rows_.size()) - 1;
}

void LpProblem::add_coefficient(int row, int col, double value)
{
    if (row < 0 || row >= num_rows() || col < 0 || col >= num_columns()) {
        throw Error("LpProblem: coefficient (" + std::to_string(row) + ", " + std::to_string(col) +
                    ") out of range");
    }
    entries_.push_back({row, col, value});
}

void LpProblem::set_bounds(int col, double lower, double upper)
{
    auto& c = column(col);
    c.lower = lower;
    c.upper = upper;
}

SparseColumns LpProblem::compress() const
{
    SparseColumns out;
    out.rows = num_rows();
    out.cols = num_columns();
    std::vector<Triplet> sorted = entries_;
    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    out.start.assign(static_cast<std::size_t>(out.cols) + 1, 0);
    std::size_t i = 0;
    for (int j = 0; j < out.cols; ++j) {
        out.start[static_cast<std::size_t>(j)] = static_cast<int>(out.index.size());
        while (i < sorted.size() && sorted[i].col == j) {
            const int row = sorted[i].row;
            double sum = 0.0;
            while (i < sorted.size() && sorted[i].col == j && sorted[i].row == row) {
                sum += sorted[i].value;
                ++i;
            }
            if (sum != 0.0) {
                out.index.push_back(row);
                out.value.push_back(sum);
            }
        }
    }
    out.start[static_cast<std::size_t>(out.cols)] = static_cast<int>(out.index.size());
    return out;
}

std::size_t LpProblem::nonzeros() const
{
    return compress().index.size();
}

std::vector<std::string> LpProblem::structural_errors() const
{
    std::vector<std::string> out;
    for (int j = 0; j < num_columns(); ++j) {
        const auto& c = columns_[static_cast<std::size_t>(j)];
        if (std::isnan(c.lower) || std::isnan(c.upper) || c.lower > c.upper) {
            out.push_back("column " + c.name + ": invalid bounds");
        }
        if (!std::isfinite(c.cost)) {
            out.push_back("column " + c.name + ": non-finite cost");
        }
    }
    for (const auto& r : rows_) {
        if (!std::isfinite(r.rhs)) {
            out.push_back("row " + r.name + ": non-finite rhs");
        }
    }
    for (const auto& t : entries_) {
        if (!std::isfinite(t.value)) {
            out.push_back("coefficient of " + columns_[static_cast<std::size_t>(t.col)].name + " in " +
                          rows_[static_cast<std::size_t>(t.row)].name + " is not finite");
        }
    }
    return out;
}

SolutionCheck check_solution(const LpProblem& problem, const LpSolution& solution)
{
    SolutionCheck out;
    const int n = problem.num_columns();
    const int m = problem.num_rows();
    if (static_cast<int>(solution.primal.size()) != n) {
        throw Error("check_solution: primal vector has wrong length");
    }
    const SparseColumns a = problem.compress();
    std::vector<double> activity(static_cast<std::size_t>(m), 0.0);
    std::vector<double> ay(static_cast<std::size_t>(n), 0.0);
    const bool have_duals = static_cast<int>(solution.duals.size()) == m;
    for (int j = 0; j < n; ++j) {
        const double xj = solution.primal[static_cast<std::size_t>(j)];
        for (int k = a.start[static_cast<std::size_t>(j)]; k < a.start[static_cast<std::size_t>(j) + 1];
             ++k) {
            const auto i = static_cast<std::size_t>(a.index[static_cast<std::size_t>(k)]);
            activity[i] += a.value[static_cast<std::size_t>(k)] * xj;
            if (have_duals) {
                ay[static_cast<std::size_t>(j)] += a.value[static_cast<std::size_t>(k)] * solution.duals[i];
            }
        }
    }

    double objective = problem.objective_offset;
    for (int j = 0; j < n; ++j) {
        const auto& c = problem.column(j);
        const double xj = solution.primal[static_cast<std::size_t>(j)];
        objective += c.cost * xj;
        const double scale_lo = 1.0 + std::fabs(std::isfinite(c.lower) ? c.lower : 0.0);
        const double scale_up = 1.0 + std::fabs(std::isfinite(c.upper) ? c.upper : 0.0);
        out.primal_residual = std::max(out.primal_residual, (c.lower - xj) / scale_lo);
        out.primal_residual = std::max(out.primal_residual, (xj - c.upper) / scale_up);
    }
    out.primal_objective = objective;
    for (int i = 0; i < m; ++i) {
        const auto& r = problem.row(i);
        const double act = activity[static_cast<std::size_t>(i)];
        const double scale = 1.0 + std::fabs(r.rhs);
        double violation = 0.0;
        switch (r.sense) {
        case RowSense::less_equal:
            violation = act - r.rhs;
            break;
        case RowSense::greater_equal:
            violation = r.rhs - act;
            break;
        case RowSense::equal:
            violation = std::fabs(act - r.rhs);
            break;
        }
        out.primal_residual = std::max(out.primal_residual, violation / scale);
    }
    if (!have_duals) {
        return out;
    }

    // Dual objective: b·y + Σ_j (d_j > 0 ? d_j·l_j : d_j·u_j).
    double dual_objective = problem.objective_offset;
    double comp = 0.0;
    double cost_scale = 1.0;
    for (int j = 0; j < n; ++j) {
        cost_scale = std::max(cost_scale, std::fabs(problem.column(j).cost));
    }
    for (int i = 0; i < m; ++i) {
        const auto& r = problem.row(i);
        const double y = solution.duals[static_cast<std::size_t>(i)];
        double wrong = 0.0;
        if (r.sense == RowSense::less_equal) {
            wrong = std::max(0.0, y);
        } else if (r.sense == RowSense::greater_equal) {
            wrong = std::max(0.0, -y);
        }
        out.dual_residual = std::max(out.dual_residual, wrong / cost_scale);
        dual_objective += r.rhs * y;
        comp += std::fabs((activity[static_cast<std::size_t>(i)] - r.rhs) * y);
    }
    for (int j = 0; j < n; ++j) {
        const auto& c = problem.column(j);
        const double xj = solution.primal[static_cast<std::size_t>(j)];
        const double d = c.cost - ay[static_cast<std::size_t>(j)];
        if (d > 0.0) {
            if (std::isfinite(c.lower)) {
                dual_objective += d * c.lower;
                comp += std::fabs(d * (xj - c.lower));
            } else {
                out.dual_residual = std::max(out.dual_residual, d / cost_scale);
            }
        } else if (d < 0.0) {
            if (std::isfinite(c.upper)) {
                dual_objective += d * c.upper;
                comp += std::fabs(d * (c.upper - xj));
            } else {
                out.dual_residual = std::max(out.dual_residual, -d / cost_scale);
            }
        }
    }
    out.dual_objective = dual_objective;
    out.complementarity = comp / (1.0 + std::fabs(objective));
    return out;
}

} // namespace enplan
