#include "enplan/simplex.hpp"

#include "enplan/error.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

namespace enplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_of_two(double value)
{
    return std::exp2(std::round(std::log2(value)));
}

/// Product-form update: column `pos` of the identity replaced by the FTRAN'd
/// entering column.
struct Eta {
    int pos = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
};

enum class Direction { increase = 1, decrease = -1 };

class Simplex {
public:
    Simplex(const LpProblem& problem, const SolveOptions& options)
        : problem_(problem), opt_(options)
    {
    }

    LpSolution run();

private:
    using Vector = Eigen::VectorXd;
    using Factor = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;

    void load();
    void scale();
    bool refactor();
    void reset_to_slack_basis();
    void compute_basic_values();
    void ftran(Vector& v) const;
    void btran(Vector& v) const;
    void column_into(int j, Vector& v) const;
    double dot_column(int j, const Vector& y) const;
    LpSolution finish(SolveStatus status, const Vector& y);

    const LpProblem& problem_;
    SolveOptions opt_;

    int m_ = 0;
    int n_ = 0;
    std::vector<int> start_;
    std::vector<int> index_;
    std::vector<double> value_;
    std::vector<double> lo_;
    std::vector<double> up_;
    std::vector<double> cost_;
    std::vector<double> row_scale_;
    std::vector<double> col_scale_;
    double obj_scale_ = 1.0;

    std::vector<double> x_;
    std::vector<int> head_;
    std::vector<int> where_;
    std::unique_ptr<Factor> lu_;
    std::vector<Eta> etas_;
    long iterations_ = 0;
    int resets_ = 0;
};

void Simplex::load()
{
    const SparseColumns a = problem_.compress();
    m_ = a.rows;
    n_ = a.cols;
    start_ = a.start;
    index_ = a.index;
    value_ = a.value;
    const auto total = static_cast<std::size_t>(n_ + m_);
    lo_.assign(total, 0.0);
    up_.assign(total, 0.0);
    cost_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
        const auto& c = problem_.column(j);
        lo_[static_cast<std::size_t>(j)] = c.lower;
        up_[static_cast<std::size_t>(j)] = c.upper;
        cost_[static_cast<std::size_t>(j)] = c.cost;
    }
    for (int i = 0; i < m_; ++i) {
        const auto& r = problem_.row(i);
        const auto k = static_cast<std::size_t>(n_ + i);
        switch (r.sense) {
        case RowSense::less_equal:
            lo_[k] = -kInf;
            up_[k] = r.rhs;
            break;
        case RowSense::greater_equal:
            lo_[k] = r.rhs;
            up_[k] = kInf;
            break;
        case RowSense::equal:
            lo_[k] = r.rhs;
            up_[k] = r.rhs;
            break;
        }
    }
    row_scale_.assign(static_cast<std::size_t>(m_), 1.0);
    col_scale_.assign(static_cast<std::size_t>(n_), 1.0);
}

void Simplex::scale()
{
    if (opt_.scaling) {
        std::vector<double> rmin(static_cast<std::size_t>(m_));
        std::vector<double> rmax(static_cast<std::size_t>(m_));
        for (int pass = 0; pass < 4; ++pass) {
            std::fill(rmin.begin(), rmin.end(), kInf);
            std::fill(rmax.begin(), rmax.end(), 0.0);
            for (int j = 0; j < n_; ++j) {
                const double cs = col_scale_[static_cast<std::size_t>(j)];
                for (int k = start_[static_cast<std::size_t>(j)]; k < start_[static_cast<std::size_t>(j) + 1];
                     ++k) {
                    const auto i = static_cast<std::size_t>(index_[static_cast<std::size_t>(k)]);
                    const double v = std::fabs(value_[static_cast<std::size_t>(k)]) * cs;
                    rmin[i] = std::min(rmin[i], v);
                    rmax[i] = std::max(rmax[i], v);
                }
            }
            for (int i = 0; i < m_; ++i) {
                const auto ii = static_cast<std::size_t>(i);
                row_scale_[ii] = rmax[ii] > 0.0 ? power_of_two(1.0 / std::sqrt(rmin[ii] * rmax[ii])) : 1.0;
            }
            for (int j = 0; j < n_; ++j) {
                double cmin = kInf;
                double cmax = 0.0;
                for (int k = start_[static_cast<std::size_t>(j)]; k < start_[static_cast<std::size_t>(j) + 1];
                     ++k) {
                    const auto i = static_cast<std::size_t>(index_[static_cast<std::size_t>(k)]);
                    const double v = std::fabs(value_[static_cast<std::size_t>(k)]) * row_scale_[i];
                    cmin = std::min(cmin, v);
                    cmax = std::max(cmax, v);
                }
                col_scale_[static_cast<std::size_t>(j)] =
                    cmax > 0.0 ? power_of_two(1.0 / std::sqrt(cmin * cmax)) : 1.0;
            }
        }
        for (int j = 0; j < n_; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const double cs = col_scale_[jj];
            for (int k = start_[jj]; k < start_[jj + 1]; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                value_[kk] *= row_scale_[static_cast<std::size_t>(index_[kk])] * cs;
            }
            lo_[jj] /= cs;
            up_[jj] /= cs;
            cost_[jj] *= cs;
        }
        for (int i = 0; i < m_; ++i) {
            const auto k = static_cast<std::size_t>(n_ + i);
            lo_[k] *= row_scale_[static_cast<std::size_t>(i)];
            up_[k] *= row_scale_[static_cast<std::size_t>(i)];
        }
    }
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) {
        cmax = std::max(cmax, std::fabs(cost_[static_cast<std::size_t>(j)]));
    }
    obj_scale_ = cmax > 0.0 ? power_of_two(1.0 / cmax) : 1.0;
    for (int j = 0; j < n_; ++j) {
        cost_[static_cast<std::size_t>(j)] *= obj_scale_;
    }
}

void Simplex::column_into(int j, Vector& v) const
{
    v.setZero(m_);
    if (j < n_) {
        const auto jj = static_cast<std::size_t>(j);
        for (int k = start_[jj]; k < start_[jj + 1]; ++k) {
            v[index_[static_cast<std::size_t>(k)]] = value_[static_cast<std::size_t>(k)];
        }
    } else {
        v[j - n_] = -1.0;
    }
}

double Simplex::dot_column(int j, const Vector& y) const
{
    if (j >= n_) {
        return -y[j - n_];
    }
    const auto jj = static_cast<std::size_t>(j);
    double sum = 0.0;
    for (int k = start_[jj]; k < start_[jj + 1]; ++k) {
        sum += value_[static_cast<std::size_t>(k)] * y[index_[static_cast<std::size_t>(k)]];
    }
    return sum;
}

bool Simplex::refactor()
{
    etas_.clear();
    if (m_ == 0) {
        return true;
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(m_) * 2);
    for (int p = 0; p < m_; ++p) {
        const int j = head_[static_cast<std::size_t>(p)];
        if (j >= n_) {
            triplets.emplace_back(j - n_, p, -1.0);
        } else {
            const auto jj = static_cast<std::size_t>(j);
            for (int k = start_[jj]; k < start_[jj + 1]; ++k) {
                triplets.emplace_back(index_[static_cast<std::size_t>(k)], p,
                                      value_[static_cast<std::size_t>(k)]);
            }
        }
    }
    Eigen::SparseMatrix<double> basis(m_, m_);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    lu_ = std::make_unique<Factor>();
    lu_->analyzePattern(basis);
    lu_->factorize(basis);
    return lu_->info() == Eigen::Success;
}

void Simplex::reset_to_slack_basis()
{
    for (int j = 0; j < n_ + m_; ++j) {
        where_[static_cast<std::size_t>(j)] = -1;
    }
    for (int i = 0; i < m_; ++i) {
        head_[static_cast<std::size_t>(i)] = n_ + i;
        where_[static_cast<std::size_t>(n_ + i)] = i;
    }
    for (int j = 0; j < n_; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        x_[jj] = std::clamp(x_[jj], lo_[jj], up_[jj]);
    }
}

void Simplex::ftran(Vector& v) const
{
    if (m_ == 0) {
        return;
    }
    v = lu_->solve(v).eval();
    for (const auto& eta : etas_) {
        const double xr = v[eta.pos] / eta.pivot;
        if (xr != 0.0) {
            for (std::size_t k = 0; k < eta.index.size(); ++k) {
                v[eta.index[k]] -= eta.value[k] * xr;
            }
        }
        v[eta.pos] = xr;
    }
}

void Simplex::btran(Vector& v) const
{
    if (m_ == 0) {
        return;
    }
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double sum = v[it->pos];
        for (std::size_t k = 0; k < it->index.size(); ++k) {
            sum -= it->value[k] * v[it->index[k]];
        }
        v[it->pos] = sum / it->pivot;
    }
    v = lu_->transpose().solve(v).eval();
}

void Simplex::compute_basic_values()
{
    if (m_ == 0) {
        return;
    }
    Vector rhs = Vector::Zero(m_);
    for (int j = 0; j < n_ + m_; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (where_[jj] >= 0 || x_[jj] == 0.0) {
            continue;
        }
        if (j >= n_) {
            rhs[j - n_] += x_[jj];
        } else {
            for (int k = start_[jj]; k < start_[jj + 1]; ++k) {
                rhs[index_[static_cast<std::size_t>(k)]] -= value_[static_cast<std::size_t>(k)] * x_[jj];
            }
        }
    }
    ftran(rhs);
    for (int p = 0; p < m_; ++p) {
        x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])] = rhs[p];
    }
}

LpSolution Simplex::finish(SolveStatus status, const Vector& y_scaled)
{
    LpSolution out;
    out.status = status;
    out.iterations = iterations_;
    out.primal.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        double v = x_[jj] * col_scale_[jj];
        const auto& c = problem_.column(j);
        // Fixed columns report their value exactly; others snap when within tolerance of a bound.
        if (c.lower == c.upper) {
            v = c.lower;
        }
        if (std::isfinite(c.lower) && std::fabs(v - c.lower) <= 1e-12 * (1.0 + std::fabs(c.lower))) {
            v = c.lower;
        }
        if (std::isfinite(c.upper) && std::fabs(v - c.upper) <= 1e-12 * (1.0 + std::fabs(c.upper))) {
            v = c.upper;
        }
        out.primal[jj] = v;
    }
    out.row_activity.assign(static_cast<std::size_t>(m_), 0.0);
    const SparseColumns a = problem_.compress();
    double objective = problem_.objective_offset;
    for (int j = 0; j < n_; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        objective += problem_.column(j).cost * out.primal[jj];
        for (int k = a.start[jj]; k < a.start[jj + 1]; ++k) {
            out.row_activity[static_cast<std::size_t>(a.index[static_cast<std::size_t>(k)])] +=
                a.value[static_cast<std::size_t>(k)] * out.primal[jj];
        }
    }
    out.objective = objective;
    if (status == SolveStatus::optimal) {
        out.duals.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            out.duals[static_cast<std::size_t>(i)] =
                row_scale_[static_cast<std::size_t>(i)] * y_scaled[i] / obj_scale_;
        }
        out.reduced_costs.resize(static_cast<std::size_t>(n_));
        for (int j = 0; j < n_; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            double d = problem_.column(j).cost;
            for (int k = a.start[jj]; k < a.start[jj + 1]; ++k) {
                d -= a.value[static_cast<std::size_t>(k)] *
                     out.duals[static_cast<std::size_t>(a.index[static_cast<std::size_t>(k)])];
            }
            out.reduced_costs[jj] = d;
        }
    }
    return out;
}

LpSolution Simplex::run()
{
    const auto errors = problem_.structural_errors();
    if (!errors.empty()) {
        throw Error("solve: structurally invalid problem: " + errors.front());
    }
    load();
    scale();

    const int total = n_ + m_;
    x_.assign(static_cast<std::size_t>(total), 0.0);
    head_.assign(static_cast<std::size_t>(m_), 0);
    where_.assign(static_cast<std::size_t>(total), -1);
    for (int j = 0; j < n_; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (std::isfinite(lo_[jj])) {
            x_[jj] = lo_[jj];
        } else if (std::isfinite(up_[jj])) {
            x_[jj] = up_[jj];
        }
    }
    reset_to_slack_basis();
    if (!refactor()) {
        throw Error("solve: slack basis could not be factorised");
    }
    compute_basic_values();

    const double ptol = opt_.primal_tolerance;
    const double dtol = opt_.dual_tolerance;
    const double pivtol = opt_.pivot_tolerance;

    Vector y(m_);
    Vector alpha(m_);
    std::vector<char> rejected(static_cast<std::size_t>(total), 0);
    bool any_rejected = false;
    bool retried_rejected = false;
    int degenerate_run = 0;
    bool bland = false;
    bool verified = false;

    while (true) {
        if (iterations_ >= opt_.max_iterations) {
            LpSolution out = finish(SolveStatus::iteration_limit, y);
            out.message = "iteration limit reached";
            return out;
        }
        if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
            if (!refactor()) {
                if (++resets_ > 3) {
                    LpSolution out = finish(SolveStatus::iteration_limit, y);
                    out.message = "basis repeatedly singular";
                    return out;
                }
                reset_to_slack_basis();
                refactor();
            }
            compute_basic_values();
        }

        // Phase selection and basic cost vector.
        double infeasibility = 0.0;
        for (int p = 0; p < m_; ++p) {
            const auto v = static_cast<std::size_t>(head_[static_cast<std::size_t>(p)]);
            if (x_[v] < lo_[v] - ptol) {
                y[p] = -1.0;
                infeasibility += lo_[v] - x_[v];
            } else if (x_[v] > up_[v] + ptol) {
                y[p] = 1.0;
                infeasibility += x_[v] - up_[v];
            } else {
                y[p] = 0.0;
            }
        }
        const bool phase_one = infeasibility > 0.0;
        if (!phase_one) {
            for (int p = 0; p < m_; ++p) {
                y[p] = cost_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])];
            }
        }
        btran(y);

        // Pricing.
        int entering = -1;
        Direction dir = Direction::increase;
        double best = 0.0;
        for (int j = 0; j < total; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            if (where_[jj] >= 0 || rejected[jj] || lo_[jj] == up_[jj]) {
                continue;
            }
            const double cj = phase_one ? 0.0 : cost_[jj];
            const double d = cj - dot_column(j, y);
            Direction candidate;
            if (d < -dtol && x_[jj] < up_[jj] - ptol) {
                candidate = Direction::increase;
            } else if (d > dtol && x_[jj] > lo_[jj] + ptol) {
                candidate = Direction::decrease;
            } else {
                continue;
            }
            const double score = std::fabs(d);
            if (bland) {
                entering = j;
                dir = candidate;
                break;
            }
            if (score > best) {
                best = score;
                entering = j;
                dir = candidate;
            }
        }

        if (entering < 0) {
            if (any_rejected && !retried_rejected) {
                std::fill(rejected.begin(), rejected.end(), 0);
                any_rejected = false;
                retried_rejected = true;
                refactor();
                compute_basic_values();
                continue;
            }
            if (!verified && !etas_.empty()) {
                verified = true;
                refactor();
                compute_basic_values();
                continue;
            }
            return finish(phase_one ? SolveStatus::infeasible : SolveStatus::optimal, y);
        }
        verified = false;

        column_into(entering, alpha);
        ftran(alpha);

        // Ratio test (Harris two-pass; exact min ratio with lowest index under Bland).
        const double sign = dir == Direction::increase ? 1.0 : -1.0;
        const auto q = static_cast<std::size_t>(entering);
        double harris = kInf;
        for (int p = 0; p < m_; ++p) {
            const double a = alpha[p];
            if (std::fabs(a) <= pivtol) {
                continue;
            }
            const auto v = static_cast<std::size_t>(head_[static_cast<std::size_t>(p)]);
            const double rate = -sign * a;
            double distance;
            if (rate < 0.0) {
                if (phase_one && x_[v] > up_[v] + ptol) {
                    distance = x_[v] - up_[v];
                } else if (x_[v] >= lo_[v] - ptol && std::isfinite(lo_[v])) {
                    distance = std::max(0.0, x_[v] - lo_[v]);
                } else {
                    continue;
                }
            } else {
                if (phase_one && x_[v] < lo_[v] - ptol) {
                    distance = lo_[v] - x_[v];
                } else if (x_[v] <= up_[v] + ptol && std::isfinite(up_[v])) {
                    distance = std::max(0.0, up_[v] - x_[v]);
                } else {
                    continue;
                }
            }
            harris = std::min(harris, (distance + ptol) / std::fabs(rate));
        }

        int leave_pos = -1;
        double leave_bound = 0.0;
        double theta = kInf;
        if (std::isfinite(harris)) {
            double best_pivot = 0.0;
            int best_var = total;
            for (int p = 0; p < m_; ++p) {
                const double a = alpha[p];
                if (std::fabs(a) <= pivtol) {
                    continue;
                }
                const auto v = static_cast<std::size_t>(head_[static_cast<std::size_t>(p)]);
                const double rate = -sign * a;
                double distance;
                double bound;
                if (rate < 0.0) {
                    if (phase_one && x_[v] > up_[v] + ptol) {
                        distance = x_[v] - up_[v];
                        bound = up_[v];
                    } else if (x_[v] >= lo_[v] - ptol && std::isfinite(lo_[v])) {
                        distance = std::max(0.0, x_[v] - lo_[v]);
                        bound = lo_[v];
                    } else {
                        continue;
                    }
                } else {
                    if (phase_one && x_[v] < lo_[v] - ptol) {
                        distance = lo_[v] - x_[v];
                        bound = lo_[v];
                    } else if (x_[v] <= up_[v] + ptol && std::isfinite(up_[v])) {
                        distance = std::max(0.0, up_[v] - x_[v]);
                        bound = up_[v];
                    } else {
                        continue;
                    }
                }
                const double ratio = distance / std::fabs(rate);
                if (bland) {
                    const int var = head_[static_cast<std::size_t>(p)];
                    const double slack = 1e-12 * std::max(1.0, std::fabs(theta));
                    if (ratio < theta - slack || (ratio <= theta + slack && var < best_var)) {
                        theta = ratio;
                        best_var = var;
                        leave_pos = p;
                        leave_bound = bound;
                    }
                } else if (ratio <= harris && std::fabs(a) > best_pivot) {
                    best_pivot = std::fabs(a);
                    leave_pos = p;
                    leave_bound = bound;
                    theta = ratio;
                }
            }
        }

        const double flip = dir == Direction::increase ? up_[q] - x_[q] : x_[q] - lo_[q];
        bool bound_flip = false;
        if (std::isfinite(flip) && flip <= theta) {
            bound_flip = true;
            theta = flip;
        }
        if (!bound_flip && leave_pos < 0) {
            if (phase_one) {
                rejected[q] = 1;
                any_rejected = true;
                continue;
            }
            if (!etas_.empty()) {
                refactor();
                compute_basic_values();
                continue;
            }
            return finish(SolveStatus::unbounded, y);
        }

        ++iterations_;
        theta = std::max(0.0, theta);
        if (theta > 0.0) {
            x_[q] += sign * theta;
            for (int p = 0; p < m_; ++p) {
                if (alpha[p] != 0.0) {
                    x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])] -= sign * alpha[p] * theta;
                }
            }
        }
        if (bound_flip) {
            x_[q] = dir == Direction::increase ? up_[q] : lo_[q];
        } else {
            const auto leaving = static_cast<std::size_t>(head_[static_cast<std::size_t>(leave_pos)]);
            x_[leaving] = leave_bound;
            where_[leaving] = -1;
            head_[static_cast<std::size_t>(leave_pos)] = entering;
            where_[q] = leave_pos;
            Eta eta;
            eta.pos = leave_pos;
            eta.pivot = alpha[leave_pos];
            for (int p = 0; p < m_; ++p) {
                if (p != leave_pos && alpha[p] != 0.0) {
                    eta.index.push_back(p);
                    eta.value.push_back(alpha[p]);
                }
            }
            etas_.push_back(std::move(eta));
            if (any_rejected) {
                std::fill(rejected.begin(), rejected.end(), 0);
                any_rejected = false;
            }
            retried_rejected = false;
        }

        if (theta <= 1e-12) {
            if (++degenerate_run > opt_.degenerate_limit) {
                bland = true;
            }
        } else {
            degenerate_run = 0;
            bland = false;
        }
    }
}

} // namespace

LpSolution solve(const LpProblem& problem, const SolveOptions& options)
{
    const auto t0 = std::chrono::steady_clock::now();
    Simplex simplex(problem, options);
    LpSolution out = simplex.run();
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace enplan
