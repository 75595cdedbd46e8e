#pragma once

#include "enplan/lp_problem.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

/// Brute-force LP minimum over a bounded feasible region: every basic solution
/// makes n of the constraints {rows, column bounds} tight, so enumerate all
/// n-subsets, solve the square system, keep the feasible ones.
/// nullopt means infeasible. Columns must have finite bounds.
inline std::optional<double> enumerate_vertices(const enplan::LpProblem& lp, double tol = 1e-9)
{
    const int n = lp.num_columns();
    const int m = lp.num_rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n);
    for (const auto& t : lp.entries()) {
        a(t.row, t.col) += t.value;
    }
    struct Hyperplane {
        Eigen::VectorXd normal;
        double value;
    };
    std::vector<Hyperplane> planes;
    for (int i = 0; i < m; ++i) {
        planes.push_back({a.row(i).transpose(), lp.row(i).rhs});
    }
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(j) = 1.0;
        planes.push_back({e, lp.column(j).lower});
        planes.push_back({e, lp.column(j).upper});
    }
    const int k = static_cast<int>(planes.size());
    std::vector<int> pick(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        pick[static_cast<std::size_t>(i)] = i;
    }
    std::optional<double> best;
    auto feasible = [&](const Eigen::VectorXd& x) {
        for (int j = 0; j < n; ++j) {
            const auto& c = lp.column(j);
            if (x(j) < c.lower - tol * (1 + std::fabs(c.lower)) || x(j) > c.upper + tol * (1 + std::fabs(c.upper))) {
                return false;
            }
        }
        const Eigen::VectorXd act = a * x;
        for (int i = 0; i < m; ++i) {
            const auto& r = lp.row(i);
            const double s = tol * (1 + std::fabs(r.rhs));
            if (r.sense != enplan::RowSense::greater_equal && act(i) > r.rhs + s) {
                return false;
            }
            if (r.sense != enplan::RowSense::less_equal && act(i) < r.rhs - s) {
                return false;
            }
        }
        return true;
    };
    while (true) {
        Eigen::MatrixXd b(n, n);
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
            b.row(i) = planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])].normal.transpose();
            rhs(i) = planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])].value;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
        if (lu.rank() == n) {
            const Eigen::VectorXd x = lu.solve(rhs);
            if (feasible(x)) {
                double obj = lp.objective_offset;
                for (int j = 0; j < n; ++j) {
                    obj += lp.column(j).cost * x(j);
                }
                if (!best || obj < *best) {
                    best = obj;
                }
            }
        }
        int i = n - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == k - n + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++pick[static_cast<std::size_t>(i)];
        for (int r = i + 1; r < n; ++r) {
            pick[static_cast<std::size_t>(r)] = pick[static_cast<std::size_t>(r - 1)] + 1;
        }
    }
    return best;
}

/// Random boxed LP with mixed row senses; integer-ish data keeps degeneracy common.
inline enplan::LpProblem random_boxed_lp(std::mt19937_64& rng, int rows, int cols, double density = 0.7)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> sense(0, 5);
    enplan::LpProblem lp;
    for (int j = 0; j < cols; ++j) {
        const double lo = unit(rng) < 0.3 ? -static_cast<double>(coef(rng) + 5) : 0.0;
        const double up = lo + 1.0 + 9.0 * unit(rng);
        lp.add_column("x" + std::to_string(j), lo, up, static_cast<double>(coef(rng)) + 0.25 * unit(rng));
    }
    for (int i = 0; i < rows; ++i) {
        const int s = sense(rng);
        const auto rs = s < 3 ? enplan::RowSense::less_equal
                              : (s < 5 ? enplan::RowSense::greater_equal : enplan::RowSense::equal);
        const int r = lp.add_row("r" + std::to_string(i), rs, 0.0);
        double at_mid = 0.0;
        for (int j = 0; j < cols; ++j) {
            if (unit(rng) < density) {
                const double v = coef(rng);
                lp.add_coefficient(r, j, v);
                at_mid += v * 0.5 * (lp.column(j).lower + lp.column(j).upper);
            }
        }
        const double shift = 4.0 * unit(rng) - 1.0;
        lp.row(r).rhs = rs == enplan::RowSense::less_equal
                            ? std::round(at_mid + shift)
                            : (rs == enplan::RowSense::greater_equal ? std::round(at_mid - shift) : std::round(at_mid));
    }
    return lp;
}

} // namespace oracle
