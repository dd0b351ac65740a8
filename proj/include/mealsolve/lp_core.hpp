// Copyright 2026 The mealsolve Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mealsolve {

enum class Sense { LessEqual, GreaterEqual, Equal };

enum class SolveStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

struct Constraint {
    std::vector<double> coeffs;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// A linear program in the form
///     minimize    c . x
///     subject to  a_i . x  {<=, >=, =}  b_i     for every constraint i
///                 x >= 0
/// Variables are continuous and implicitly bounded below by zero.
struct LpProblem {
    std::size_t variable_count = 0;
    std::vector<double> objective;                // one cost per variable
    std::vector<Constraint> constraints;
    std::vector<std::string> variable_names;      // optional, empty or one per variable
    std::vector<std::string> constraint_names;    // optional, used in diagnostics

    void add_constraint(std::vector<double> coeffs, Sense sense, double rhs,
                        std::string name = {}) {
        constraints.push_back({std::move(coeffs), sense, rhs});
        if (!name.empty() || !constraint_names.empty()) {
            constraint_names.resize(constraints.size());
            constraint_names.back() = std::move(name);
        }
    }
};

/// Validates structural invariants; throws std::invalid_argument with the
/// offending row/column on failure.
inline void validate(const LpProblem& p) {
    if (p.variable_count == 0) throw std::invalid_argument("LpProblem: variable_count must be >= 1");
    if (p.objective.size() != p.variable_count)
        throw std::invalid_argument("LpProblem: objective has " + std::to_string(p.objective.size()) +
                                    " entries, expected " + std::to_string(p.variable_count));
    for (std::size_t j = 0; j < p.objective.size(); ++j)
        if (!std::isfinite(p.objective[j]))
            throw std::invalid_argument("LpProblem: non-finite objective coefficient at column " + std::to_string(j));
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const Constraint& row = p.constraints[i];
        if (row.coeffs.size() != p.variable_count)
            throw std::invalid_argument("LpProblem: constraint " + std::to_string(i) + " has " +
                                        std::to_string(row.coeffs.size()) + " coefficients, expected " +
                                        std::to_string(p.variable_count));
        if (!std::isfinite(row.rhs))
            throw std::invalid_argument("LpProblem: non-finite rhs in constraint " + std::to_string(i));
        for (std::size_t j = 0; j < row.coeffs.size(); ++j)
            if (!std::isfinite(row.coeffs[j]))
                throw std::invalid_argument("LpProblem: non-finite coefficient at row " + std::to_string(i) +
                                            ", column " + std::to_string(j));
    }
}

enum class ColumnKind { Original, Slack, Surplus, Artificial };

/// Equality-form program `min c.x  s.t.  A x = b, x >= 0, b >= 0` produced by
/// to_standard_form. Rows are sign-flipped so that b >= 0; the bookkeeping
/// below maps columns and rows back to the source problem.
struct StandardForm {
    std::size_t num_rows = 0;
    std::size_t num_cols = 0;
    std::size_t num_original = 0;

    std::vector<double> cost;                  // per column, zero on added columns
    std::vector<std::vector<double>> columns;  // column-major dense storage
    std::vector<double> rhs;                   // all >= 0

    std::vector<ColumnKind> column_kind;
    std::vector<int> column_origin;     // original variable index (Original), else source row
    std::vector<int> source_row;        // standard row -> original constraint index
    std::vector<double> row_sign;       // +-1, applied before scaling
    std::vector<double> row_scale;      // > 0
    std::vector<int> artificial_of_row; // column index or -1
    std::vector<int> basis_seed;        // identity-basis column per row

    bool trivially_infeasible = false;
    std::size_t infeasible_row = 0;          // valid when trivially_infeasible
    std::vector<std::size_t> dropped_rows;   // zero rows with zero rhs, removed
};

/// Canonicalizes an LpProblem: flips rows with negative rhs, drops all-zero
/// rows (zero rhs: dropped with a note; nonzero rhs: marks the program
/// trivially infeasible), then adds a slack column per <= row, a surplus
/// column per >= row, and an artificial column for every row that lacks an
/// identity-basis column. Rows are kept in their input scale so pivoting is
/// reproducible from the raw coefficients; residuals are judged against row
/// magnitudes downstream (see certificate).
inline StandardForm to_standard_form(const LpProblem& p) {
    validate(p);
    StandardForm sf;
    sf.num_original = p.variable_count;

    struct Row {
        std::vector<double> coeffs;
        Sense sense;
        double rhs;
        int source;
        double sign;
        double scale;
    };
    std::vector<Row> rows;
    rows.reserve(p.constraints.size());
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const Constraint& c = p.constraints[i];
        double maxabs = 0.0;
        for (double v : c.coeffs) maxabs = std::max(maxabs, std::fabs(v));
        if (maxabs == 0.0) {
            if (c.rhs == 0.0 || (c.sense == Sense::LessEqual && c.rhs > 0.0) ||
                (c.sense == Sense::GreaterEqual && c.rhs < 0.0)) {
                sf.dropped_rows.push_back(i);
            } else {
                sf.trivially_infeasible = true;
                sf.infeasible_row = i;
            }
            continue;
        }
        Row r;
        r.coeffs = c.coeffs;
        r.sense = c.sense;
        r.rhs = c.rhs;
        r.source = static_cast<int>(i);
        r.sign = 1.0;
        if (r.rhs < 0.0) {
            r.sign = -1.0;
            r.rhs = -r.rhs;
            for (double& v : r.coeffs) v = -v;
            if (r.sense == Sense::LessEqual) r.sense = Sense::GreaterEqual;
            else if (r.sense == Sense::GreaterEqual) r.sense = Sense::LessEqual;
        }
        r.scale = 1.0;
        rows.push_back(std::move(r));
    }

    const std::size_t m = rows.size();
    const std::size_t n = p.variable_count;
    sf.num_rows = m;

    std::size_t extra = 0;  // slack + surplus columns
    for (const Row& r : rows)
        if (r.sense != Sense::Equal) ++extra;
    std::size_t artificials = 0;
    for (const Row& r : rows)
        if (r.sense != Sense::LessEqual) ++artificials;

    sf.num_cols = n + extra + artificials;
    sf.cost.assign(sf.num_cols, 0.0);
    std::copy(p.objective.begin(), p.objective.end(), sf.cost.begin());
    sf.columns.assign(sf.num_cols, std::vector<double>(m, 0.0));
    sf.rhs.resize(m);
    sf.column_kind.assign(sf.num_cols, ColumnKind::Original);
    sf.column_origin.assign(sf.num_cols, -1);
    sf.source_row.resize(m);
    sf.row_sign.resize(m);
    sf.row_scale.resize(m);
    sf.artificial_of_row.assign(m, -1);
    sf.basis_seed.assign(m, -1);

    for (std::size_t j = 0; j < n; ++j) sf.column_origin[j] = static_cast<int>(j);
    for (std::size_t i = 0; i < m; ++i) {
        const Row& r = rows[i];
        for (std::size_t j = 0; j < n; ++j) sf.columns[j][i] = r.coeffs[j];
        sf.rhs[i] = r.rhs;
        sf.source_row[i] = r.source;
        sf.row_sign[i] = r.sign;
        sf.row_scale[i] = r.scale;
    }

    std::size_t next = n;
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].sense == Sense::LessEqual) {
            sf.columns[next][i] = 1.0;
            sf.column_kind[next] = ColumnKind::Slack;
            sf.column_origin[next] = static_cast<int>(i);
            sf.basis_seed[i] = static_cast<int>(next);
            ++next;
        } else if (rows[i].sense == Sense::GreaterEqual) {
            sf.columns[next][i] = -1.0;
            sf.column_kind[next] = ColumnKind::Surplus;
            sf.column_origin[next] = static_cast<int>(i);
            ++next;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].sense != Sense::LessEqual) {
            sf.columns[next][i] = 1.0;
            sf.column_kind[next] = ColumnKind::Artificial;
            sf.column_origin[next] = static_cast<int>(i);
            sf.artificial_of_row[i] = static_cast<int>(next);
            sf.basis_seed[i] = static_cast<int>(next);
            ++next;
        }
    }
    return sf;
}

enum class PivotRule {
    DantzigWithBlandFallback,  // default: fast pricing, guaranteed termination
    DantzigOnly,               // diagnostic: can cycle on degenerate programs
    BlandOnly,
};

struct SolverOptions {
    PivotRule pivot_rule = PivotRule::DantzigWithBlandFallback;
    long max_iterations = 0;       // 0 = unlimited
    int refactor_interval = 50;    // pivots between basis-inverse rebuilds
    double tol_feas = 1e-7;        // feasibility, on scaled rows
    double tol_opt = 1e-9;         // reduced-cost optimality threshold
    double pivot_floor = 1e-10;    // smallest acceptable ratio-test pivot
    double basis_residual_tol = 1e-8;  // max|B Binv - I| refactor trigger
};

/// Thrown when the basis matrix cannot be inverted; carries the offending
/// basis column set.
class SingularBasisError : public std::runtime_error {
public:
    explicit SingularBasisError(std::vector<int> basis_columns)
        : std::runtime_error("simplex: singular basis"), basis(std::move(basis_columns)) {}
    std::vector<int> basis;
};

class IterationLimitError : public std::runtime_error {
public:
    explicit IterationLimitError(long limit)
        : std::runtime_error("simplex: iteration limit " + std::to_string(limit) + " exceeded") {}
};

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> weights;        // per original variable, >= 0
    double objective_value = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> duals;          // per original constraint
    std::vector<double> reduced_costs;  // per original variable
    long iterations = 0;
    double solve_time = 0.0;            // seconds
    double phase1_residual = 0.0;       // infeasibility measure when status == Infeasible
    std::vector<double> ray;            // unbounded direction when status == Unbounded
    std::vector<std::string> notes;     // e.g. dropped degenerate rows
};

namespace detail {

// Primal revised simplex over a StandardForm, with an explicit basis inverse
// that is rebuilt from scratch every refactor_interval pivots or when the
// probed residual of B * Binv drifts past basis_residual_tol.
class RevisedSimplex {
public:
    RevisedSimplex(StandardForm sf, const SolverOptions& opt)
        : sf_(std::move(sf)), opt_(opt), m_(sf_.num_rows) {
        basis_ = sf_.basis_seed;
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
        xb_ = sf_.rhs;
        is_basic_.assign(sf_.num_cols, false);
        for (int j : basis_) is_basic_[static_cast<std::size_t>(j)] = true;
        bland_engaged_ = (opt_.pivot_rule == PivotRule::BlandOnly);
        degenerate_streak_limit_ = 3 * static_cast<long>(m_ + sf_.num_cols);
    }

    bool has_artificials() const {
        return std::any_of(sf_.artificial_of_row.begin(), sf_.artificial_of_row.end(),
                           [](int a) { return a >= 0; });
    }

    // Minimizes the sum of artificial variables. Returns the phase-1 optimum.
    double run_phase1() {
        active_cost_.assign(sf_.num_cols, 0.0);
        for (std::size_t j = 0; j < sf_.num_cols; ++j)
            if (sf_.column_kind[j] == ColumnKind::Artificial) active_cost_[j] = 1.0;
        artificials_banned_ = true;
        iterate();
        return objective();
    }

    // Pivots leftover artificials out of the basis; rows where that is
    // impossible are linearly dependent on the rest and get deleted.
    void eliminate_artificials() {
        std::vector<std::size_t> redundant;
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t b = static_cast<std::size_t>(basis_[r]);
            if (sf_.column_kind[b] != ColumnKind::Artificial) continue;
            bool pivoted = false;
            for (std::size_t j = 0; j < sf_.num_cols && !pivoted; ++j) {
                if (is_basic_[j] || sf_.column_kind[j] == ColumnKind::Artificial) continue;
                double u_rj = 0.0;
                for (std::size_t i = 0; i < m_; ++i) u_rj += binv_[r * m_ + i] * sf_.columns[j][i];
                if (std::fabs(u_rj) > 1e-8) {
                    std::vector<double> u = ftran(sf_.columns[j]);
                    apply_pivot(j, r, u, 0.0);
                    pivoted = true;
                }
            }
            if (!pivoted) redundant.push_back(r);
        }
        if (!redundant.empty()) drop_rows(redundant);
        drop_artificial_columns();
        refactorize();
    }

    // Optimizes the true cost vector. Assumes a feasible basis.
    SolveStatus run_phase2() {
        active_cost_ = sf_.cost;
        artificials_banned_ = true;
        return iterate();
    }

    double objective() const {
        double z = 0.0;
        for (std::size_t r = 0; r < m_; ++r) z += active_cost_[static_cast<std::size_t>(basis_[r])] * xb_[r];
        return z;
    }

    // Rebuilds Binv and the basic solution from scratch before extraction so
    // reported residuals reflect a fresh factorization.
    void finalize() { refactorize(); }

    std::vector<double> primal_original() const {
        std::vector<double> x(sf_.num_original, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t j = static_cast<std::size_t>(basis_[r]);
            if (sf_.column_kind[j] == ColumnKind::Original)
                x[static_cast<std::size_t>(sf_.column_origin[j])] = std::max(0.0, xb_[r]);
        }
        return x;
    }

    // Duals of the original constraints: y_orig = sign * scale * y_standard.
    std::vector<double> duals_original(std::size_t original_row_count) const {
        std::vector<double> y = compute_y();
        std::vector<double> out(original_row_count, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            out[static_cast<std::size_t>(sf_.source_row[i])] = sf_.row_sign[i] * sf_.row_scale[i] * y[i];
        return out;
    }

    std::vector<double> reduced_costs_original() const {
        std::vector<double> y = compute_y();
        std::vector<double> d(sf_.num_original, 0.0);
        for (std::size_t j = 0; j < sf_.num_original; ++j) {
            double v = active_cost_[j];
            for (std::size_t i = 0; i < m_; ++i) v -= y[i] * sf_.columns[j][i];
            d[j] = v;
        }
        return d;
    }

    // Unbounded direction in original-variable space, built from the entering
    // column that passed the (empty) ratio test.
    std::vector<double> ray_original() const {
        std::vector<double> d(sf_.num_original, 0.0);
        if (ray_column_ < 0) return d;
        const std::size_t je = static_cast<std::size_t>(ray_column_);
        if (sf_.column_kind[je] == ColumnKind::Original)
            d[static_cast<std::size_t>(sf_.column_origin[je])] = 1.0;
        std::vector<double> u = ftran(sf_.columns[je]);
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t j = static_cast<std::size_t>(basis_[r]);
            if (sf_.column_kind[j] == ColumnKind::Original)
                d[static_cast<std::size_t>(sf_.column_origin[j])] = -u[r];
        }
        return d;
    }

    long iterations() const { return iterations_; }
    const StandardForm& standard_form() const { return sf_; }

private:
    std::vector<double> compute_y() const {
        std::vector<double> y(m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            const double cb = active_cost_[static_cast<std::size_t>(basis_[r])];
            if (cb == 0.0) continue;
            const double* row = &binv_[r * m_];
            for (std::size_t i = 0; i < m_; ++i) y[i] += cb * row[i];
        }
        return y;
    }

    std::vector<double> ftran(const std::vector<double>& col) const {
        std::vector<double> u(m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            const double* row = &binv_[r * m_];
            double s = 0.0;
            for (std::size_t i = 0; i < m_; ++i) s += row[i] * col[i];
            u[r] = s;
        }
        return u;
    }

    SolveStatus iterate() {
        while (true) {
            if (opt_.max_iterations > 0 && iterations_ >= opt_.max_iterations)
                throw IterationLimitError(opt_.max_iterations);

            const std::vector<double> y = compute_y();
            int entering = -1;
            double best = -opt_.tol_opt;
            for (std::size_t j = 0; j < sf_.num_cols; ++j) {
                if (is_basic_[j]) continue;
                if (artificials_banned_ && sf_.column_kind[j] == ColumnKind::Artificial) continue;
                double d = active_cost_[j];
                const std::vector<double>& col = sf_.columns[j];
                for (std::size_t i = 0; i < m_; ++i) d -= y[i] * col[i];
                if (d < best) {
                    if (bland_engaged_) {  // smallest improving index
                        entering = static_cast<int>(j);
                        break;
                    }
                    best = d;
                    entering = static_cast<int>(j);
                }
            }
            if (entering < 0) return SolveStatus::Optimal;

            const std::vector<double> u = ftran(sf_.columns[static_cast<std::size_t>(entering)]);
            int leaving_row = -1;
            double theta = 0.0;
            for (std::size_t r = 0; r < m_; ++r) {
                if (u[r] <= opt_.pivot_floor) continue;
                const double ratio = xb_[r] / u[r];
                if (leaving_row < 0 || ratio < theta - 1e-12) {
                    leaving_row = static_cast<int>(r);
                    theta = ratio;
                } else if (ratio <= theta + 1e-12 && bland_engaged_ &&
                           basis_[r] < basis_[static_cast<std::size_t>(leaving_row)]) {
                    // Bland ties break on the smallest basic variable index;
                    // otherwise the topmost tied row keeps the pivot.
                    leaving_row = static_cast<int>(r);
                    theta = ratio;
                }
            }
            if (leaving_row < 0) {
                ray_column_ = entering;
                return SolveStatus::Unbounded;
            }
            theta = std::max(theta, 0.0);

#ifdef MEALSOLVE_TRACE_PIVOTS
            std::fprintf(stderr, "pivot %ld: enter col %d, leave col %d (row %d), theta %.6g\n",
                         iterations_, entering, basis_[static_cast<std::size_t>(leaving_row)],
                         leaving_row, theta);
#endif

            apply_pivot(static_cast<std::size_t>(entering), static_cast<std::size_t>(leaving_row), u, theta);

            if (theta <= 1e-12) {
                if (++degenerate_streak_ >= degenerate_streak_limit_ &&
                    opt_.pivot_rule == PivotRule::DantzigWithBlandFallback)
                    bland_engaged_ = true;
            } else {
                degenerate_streak_ = 0;
            }
        }
    }

    void apply_pivot(std::size_t entering, std::size_t r, const std::vector<double>& u, double theta) {
        ++iterations_;
        ++pivots_since_refactor_;

        for (std::size_t i = 0; i < m_; ++i)
            if (i != r) xb_[i] -= theta * u[i];
        xb_[r] = theta;

        const double piv = u[r];
        double* prow = &binv_[r * m_];
        for (std::size_t i = 0; i < m_; ++i) prow[i] /= piv;
        for (std::size_t k = 0; k < m_; ++k) {
            if (k == r || u[k] == 0.0) continue;
            double* krow = &binv_[k * m_];
            const double f = u[k];
            for (std::size_t i = 0; i < m_; ++i) krow[i] -= f * prow[i];
        }

        is_basic_[static_cast<std::size_t>(basis_[r])] = false;
        basis_[r] = static_cast<int>(entering);
        is_basic_[entering] = true;

        if (pivots_since_refactor_ >= opt_.refactor_interval || probe_residual() > opt_.basis_residual_tol)
            refactorize();
    }

    // Residual of one column of B * Binv - I; cycles through columns so drift
    // anywhere in the inverse is eventually noticed.
    double probe_residual() {
        if (m_ == 0) return 0.0;
        const std::size_t k = static_cast<std::size_t>(iterations_) % m_;
        double worst = 0.0;
        std::vector<double> bw(m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            const double w = binv_[r * m_ + k];
            if (w == 0.0) continue;
            const std::vector<double>& col = sf_.columns[static_cast<std::size_t>(basis_[r])];
            for (std::size_t i = 0; i < m_; ++i) bw[i] += w * col[i];
        }
        for (std::size_t i = 0; i < m_; ++i)
            worst = std::max(worst, std::fabs(bw[i] - (i == k ? 1.0 : 0.0)));
        return worst;
    }

    void refactorize() {
        pivots_since_refactor_ = 0;
        if (m_ == 0) return;
        // Gauss-Jordan with partial pivoting on [B | I].
        std::vector<double> work(m_ * 2 * m_, 0.0);
        const std::size_t w = 2 * m_;
        for (std::size_t r = 0; r < m_; ++r) {
            const std::vector<double>& col = sf_.columns[static_cast<std::size_t>(basis_[r])];
            for (std::size_t i = 0; i < m_; ++i) work[i * w + r] = col[i];
            work[r * w + m_ + r] = 1.0;
        }
        for (std::size_t c = 0; c < m_; ++c) {
            std::size_t pr = c;
            for (std::size_t r = c + 1; r < m_; ++r)
                if (std::fabs(work[r * w + c]) > std::fabs(work[pr * w + c])) pr = r;
            if (std::fabs(work[pr * w + c]) < 1e-12) throw SingularBasisError(basis_);
            if (pr != c)
                for (std::size_t i = 0; i < w; ++i) std::swap(work[pr * w + i], work[c * w + i]);
            const double piv = work[c * w + c];
            for (std::size_t i = 0; i < w; ++i) work[c * w + i] /= piv;
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == c) continue;
                const double f = work[r * w + c];
                if (f == 0.0) continue;
                for (std::size_t i = 0; i < w; ++i) work[r * w + i] -= f * work[c * w + i];
            }
        }
        for (std::size_t r = 0; r < m_; ++r)
            for (std::size_t i = 0; i < m_; ++i) binv_[r * m_ + i] = work[r * w + m_ + i];
        // fresh basic solution
        for (std::size_t r = 0; r < m_; ++r) {
            double s = 0.0;
            const double* row = &binv_[r * m_];
            for (std::size_t i = 0; i < m_; ++i) s += row[i] * sf_.rhs[i];
            xb_[r] = s;
        }
    }

    void drop_rows(const std::vector<std::size_t>& rows_desc_input) {
        std::vector<std::size_t> rows = rows_desc_input;
        std::sort(rows.rbegin(), rows.rend());
        for (std::size_t r : rows) {
            for (auto& col : sf_.columns) col.erase(col.begin() + static_cast<long>(r));
            sf_.rhs.erase(sf_.rhs.begin() + static_cast<long>(r));
            sf_.source_row.erase(sf_.source_row.begin() + static_cast<long>(r));
            sf_.row_sign.erase(sf_.row_sign.begin() + static_cast<long>(r));
            sf_.row_scale.erase(sf_.row_scale.begin() + static_cast<long>(r));
            is_basic_[static_cast<std::size_t>(basis_[r])] = false;
            basis_.erase(basis_.begin() + static_cast<long>(r));
            xb_.erase(xb_.begin() + static_cast<long>(r));
        }
        m_ = sf_.rhs.size();
        sf_.num_rows = m_;
        binv_.assign(m_ * m_, 0.0);
    }

    void drop_artificial_columns() {
        // Artificials occupy the trailing columns and are never basic here.
        std::size_t keep = sf_.num_cols;
        while (keep > 0 && sf_.column_kind[keep - 1] == ColumnKind::Artificial) --keep;
        sf_.columns.resize(keep);
        sf_.cost.resize(keep);
        sf_.column_kind.resize(keep);
        sf_.column_origin.resize(keep);
        sf_.num_cols = keep;
        is_basic_.resize(keep);
        sf_.artificial_of_row.assign(m_, -1);
    }

    StandardForm sf_;
    SolverOptions opt_;
    std::size_t m_;
    std::vector<int> basis_;
    std::vector<double> binv_;  // row-major m x m
    std::vector<double> xb_;
    std::vector<double> active_cost_;
    std::vector<bool> is_basic_;
    bool artificials_banned_ = false;
    bool bland_engaged_ = false;
    long degenerate_streak_ = 0;
    long degenerate_streak_limit_ = 0;
    long iterations_ = 0;
    int pivots_since_refactor_ = 0;
    int ray_column_ = -1;
};

}  // namespace detail

/// Two-phase primal revised simplex. Dantzig pricing by default, switching
/// permanently to Bland's rule after a long run of degenerate pivots so
/// termination is guaranteed.
inline Solution solve(const LpProblem& problem, const SolverOptions& options = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    StandardForm sf = to_standard_form(problem);

    Solution sol;
    for (std::size_t r : sf.dropped_rows)
        sol.notes.push_back("dropped empty constraint " + std::to_string(r) + " (0 = 0)");
    if (sf.trivially_infeasible) {
        sol.status = SolveStatus::Infeasible;
        sol.weights.assign(problem.variable_count, 0.0);
        const Constraint& c = problem.constraints[sf.infeasible_row];
        sol.phase1_residual = std::fabs(c.rhs);
        sol.notes.push_back("constraint " + std::to_string(sf.infeasible_row) +
                            " has no variables but nonzero rhs");
        sol.duals.assign(problem.constraints.size(), 0.0);
        sol.reduced_costs = problem.objective;
        sol.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return sol;
    }

    detail::RevisedSimplex simplex(std::move(sf), options);

    if (simplex.has_artificials()) {
        const double infeas = simplex.run_phase1();
        if (infeas > options.tol_feas) {
            simplex.finalize();
            sol.status = SolveStatus::Infeasible;
            sol.phase1_residual = infeas;
            sol.weights = simplex.primal_original();
            sol.duals = simplex.duals_original(problem.constraints.size());
            sol.reduced_costs = simplex.reduced_costs_original();
            sol.iterations = simplex.iterations();
            sol.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return sol;
        }
        simplex.eliminate_artificials();
    }

    const SolveStatus status = simplex.run_phase2();
    simplex.finalize();

    sol.status = status;
    sol.weights = simplex.primal_original();
    sol.iterations = simplex.iterations();
    sol.duals = simplex.duals_original(problem.constraints.size());
    sol.reduced_costs = simplex.reduced_costs_original();
    if (status == SolveStatus::Optimal) {
        double z = 0.0;
        for (std::size_t j = 0; j < problem.variable_count; ++j)
            z += problem.objective[j] * sol.weights[j];
        sol.objective_value = z;
    } else if (status == SolveStatus::Unbounded) {
        sol.ray = simplex.ray_original();
    }
    sol.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

enum class Direction { Minimize, Maximize };

/// Two-level lexicographic objective. The primary objective is optimized
/// first; the secondary is then optimized over the set of points whose
/// primary value stays within degradation_tolerance of the stage-1 optimum.
struct LexicographicSpec {
    std::vector<double> primary;
    Direction primary_direction = Direction::Minimize;
    std::vector<double> secondary;
    Direction secondary_direction = Direction::Minimize;
    double degradation_tolerance = 0.0;  // >= 0
};

/// The stage-2 program: the base constraints plus one row pinning the primary
/// objective near its stage-1 optimum `achieved` (in the primary's own
/// direction).
inline LpProblem append_level_constraint(const LpProblem& problem, const std::vector<double>& objective,
                                         Direction direction, double achieved, double tolerance) {
    LpProblem out = problem;
    if (direction == Direction::Minimize)
        out.add_constraint(objective, Sense::LessEqual, achieved + tolerance, "lexicographic level");
    else
        out.add_constraint(objective, Sense::GreaterEqual, achieved - tolerance, "lexicographic level");
    return out;
}

inline Solution solve_lexicographic(const LpProblem& problem, const LexicographicSpec& spec,
                                    const SolverOptions& options = {}) {
    if (spec.primary.size() != problem.variable_count || spec.secondary.size() != problem.variable_count)
        throw std::invalid_argument("LexicographicSpec: objective length must equal variable_count");
    if (spec.degradation_tolerance < 0.0)
        throw std::invalid_argument("LexicographicSpec: degradation_tolerance must be >= 0");

    LpProblem stage1 = problem;
    stage1.objective = spec.primary;
    if (spec.primary_direction == Direction::Maximize)
        for (double& v : stage1.objective) v = -v;

    Solution first = solve(stage1, options);
    if (first.status != SolveStatus::Optimal) return first;
    const double primary_value = spec.primary_direction == Direction::Maximize
                                     ? -first.objective_value
                                     : first.objective_value;

    LpProblem stage2 = append_level_constraint(problem, spec.primary, spec.primary_direction,
                                               primary_value, spec.degradation_tolerance);
    stage2.objective = spec.secondary;
    if (spec.secondary_direction == Direction::Maximize)
        for (double& v : stage2.objective) v = -v;

    Solution second = solve(stage2, options);
    second.iterations += first.iterations;
    second.solve_time += first.solve_time;
    if (second.status == SolveStatus::Optimal && spec.secondary_direction == Direction::Maximize)
        second.objective_value = -second.objective_value;
    return second;
}

/// Independent optimality check: recomputes primal residuals, dual
/// feasibility, complementary slackness, and the duality gap from the raw
/// problem data and the returned solution, sharing no code with the solver.
struct CertificateReport {
    double max_primal_violation = 0.0;        // on rows scaled by 1/max|a|
    double max_dual_violation = 0.0;
    double complementary_slackness = 0.0;
    double duality_gap = 0.0;
    bool passed = false;

    static constexpr double pass_threshold = 1e-6;
};

inline CertificateReport certificate(const LpProblem& problem, const Solution& solution) {
    if (solution.status != SolveStatus::Optimal)
        throw std::invalid_argument("certificate: solution status must be Optimal");
    if (solution.weights.size() != problem.variable_count ||
        solution.duals.size() != problem.constraints.size())
        throw std::invalid_argument("certificate: solution does not match problem dimensions");

    CertificateReport rep;
    const std::vector<double>& x = solution.weights;
    const std::vector<double>& y = solution.duals;

    double primal_obj = 0.0;
    for (std::size_t j = 0; j < problem.variable_count; ++j) {
        primal_obj += problem.objective[j] * x[j];
        rep.max_primal_violation = std::max(rep.max_primal_violation, -x[j]);
    }

    double dual_obj = 0.0;
    for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
        const Constraint& c = problem.constraints[i];
        double activity = 0.0;
        double maxabs = 0.0;
        for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
            activity += c.coeffs[j] * x[j];
            maxabs = std::max(maxabs, std::fabs(c.coeffs[j]));
        }
        const double scale = maxabs > 0.0 ? 1.0 / maxabs : 1.0;
        double viol = 0.0;
        switch (c.sense) {
            case Sense::LessEqual: viol = activity - c.rhs; break;
            case Sense::GreaterEqual: viol = c.rhs - activity; break;
            case Sense::Equal: viol = std::fabs(activity - c.rhs); break;
        }
        rep.max_primal_violation = std::max(rep.max_primal_violation, viol * scale);

        // dual sign, measured in the same scaled units the solver prices in
        double sign_viol = 0.0;
        if (c.sense == Sense::GreaterEqual) sign_viol = std::max(0.0, -y[i]);
        else if (c.sense == Sense::LessEqual) sign_viol = std::max(0.0, y[i]);
        rep.max_dual_violation = std::max(rep.max_dual_violation, sign_viol * maxabs);

        rep.complementary_slackness =
            std::max(rep.complementary_slackness, std::fabs(y[i] * (activity - c.rhs)));
        dual_obj += y[i] * c.rhs;
    }

    for (std::size_t j = 0; j < problem.variable_count; ++j) {
        double d = problem.objective[j];
        for (std::size_t i = 0; i < problem.constraints.size(); ++i)
            d -= y[i] * problem.constraints[i].coeffs[j];
        rep.max_dual_violation = std::max(rep.max_dual_violation, -d);
        rep.complementary_slackness = std::max(rep.complementary_slackness, std::fabs(d * x[j]));
    }

    rep.duality_gap = std::fabs(primal_obj - dual_obj);
    rep.passed = rep.max_primal_violation <= CertificateReport::pass_threshold &&
                 rep.max_dual_violation <= CertificateReport::pass_threshold &&
                 rep.complementary_slackness <= CertificateReport::pass_threshold &&
                 rep.duality_gap <= CertificateReport::pass_threshold;
    return rep;
}

}  // namespace mealsolve
