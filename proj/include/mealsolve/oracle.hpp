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

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mealsolve/diet_model.hpp"
#include "mealsolve/ingest.hpp"
#include "mealsolve/lp_core.hpp"

namespace mealsolve {

class EnumerationBudgetError : public std::runtime_error {
public:
    explicit EnumerationBudgetError(double combinations, double budget)
        : std::runtime_error("vertex enumeration refused: " + std::to_string(combinations) +
                             " basis subsets exceed budget " + std::to_string(budget)) {}
};

struct VertexEnumeration {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> optimal_vertices;  // deduplicated argmin set
    std::size_t feasible_vertex_count = 0;
    double condition_estimate = 1.0;  // pivot-ratio proxy at the optimal vertex
};

namespace oracle_detail {

// One candidate active constraint, a . x = b.
struct ActiveRow {
    std::vector<double> a;
    double b;
};

// Solves the n x n active-constraint system by Gaussian elimination with
// partial pivoting. Returns false when numerically singular; cond receives
// max|pivot| / min|pivot|.
inline bool solve_active_set(std::vector<ActiveRow> sys, std::vector<double>& x, double& cond) {
    const std::size_t n = sys.size();
    double max_piv = 0.0, min_piv = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pr = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(sys[r].a[c]) > std::fabs(sys[pr].a[c])) pr = r;
        const double piv = sys[pr].a[c];
        if (std::fabs(piv) < 1e-11) return false;
        std::swap(sys[pr], sys[c]);
        max_piv = std::max(max_piv, std::fabs(piv));
        min_piv = std::min(min_piv, std::fabs(piv));
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = sys[r].a[c] / piv;
            if (f == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) sys[r].a[j] -= f * sys[c].a[j];
            sys[r].b -= f * sys[c].b;
        }
    }
    x.resize(n);
    for (std::size_t c = 0; c < n; ++c) x[c] = sys[c].b / sys[c].a[c];
    cond = max_piv / min_piv;
    return true;
}

inline bool feasible_point(const LpProblem& p, const std::vector<double>& x, double tol) {
    for (double v : x)
        if (v < -tol) return false;
    for (const Constraint& c : p.constraints) {
        double act = 0.0, maxabs = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            act += c.coeffs[j] * x[j];
            maxabs = std::max(maxabs, std::fabs(c.coeffs[j]));
        }
        const double scaled_tol = tol * std::max(1.0, maxabs);
        switch (c.sense) {
            case Sense::LessEqual:
                if (act > c.rhs + scaled_tol) return false;
                break;
            case Sense::GreaterEqual:
                if (act < c.rhs - scaled_tol) return false;
                break;
            case Sense::Equal:
                if (std::fabs(act - c.rhs) > scaled_tol) return false;
                break;
        }
    }
    return true;
}

inline double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Enumerates every basic feasible solution of { A x sense b, x >= 0 } by
// trying all size-n subsets of {rows as equalities} u {x_j = 0}.
struct BasicSolutions {
    std::vector<std::vector<double>> points;
    std::vector<double> conditions;
};

inline BasicSolutions enumerate_basic_feasible(const LpProblem& p, double feas_tol) {
    const std::size_t n = p.variable_count;
    const std::size_t m = p.constraints.size();
    std::vector<ActiveRow> pool;
    pool.reserve(m + n);
    for (const Constraint& c : p.constraints) pool.push_back({c.coeffs, c.rhs});
    for (std::size_t j = 0; j < n; ++j) {
        ActiveRow r;
        r.a.assign(n, 0.0);
        r.a[j] = 1.0;
        r.b = 0.0;
        pool.push_back(std::move(r));
    }

    BasicSolutions out;
    std::vector<std::size_t> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;
    if (pool.size() < n) return out;

    while (true) {
        std::vector<ActiveRow> sys;
        sys.reserve(n);
        for (std::size_t i : pick) sys.push_back(pool[i]);
        std::vector<double> x;
        double cond = 1.0;
        if (solve_active_set(std::move(sys), x, cond) && feasible_point(p, x, feas_tol)) {
            bool dup = false;
            for (const auto& seen : out.points) {
                double d = 0.0;
                for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::fabs(seen[j] - x[j]));
                if (d <= 1e-7) {
                    dup = true;
                    break;
                }
            }
            if (!dup) {
                out.points.push_back(std::move(x));
                out.conditions.push_back(cond);
            }
        }
        // next combination
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (pick[i] != i + pool.size() - n) {
                ++pick[i];
                for (std::size_t k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
                break;
            }
            if (i == 0) return out;
        }
        if (n == 0) return out;
    }
}

}  // namespace oracle_detail

/// Brute-force reference: enumerates every basic feasible solution and takes
/// the best. Unboundedness is decided exactly as well, by enumerating the
/// vertices of the normalized recession cone { A d sense-homogeneous 0,
/// sum d = 1, d >= 0 } and looking for a cost-improving ray. Refuses with
/// EnumerationBudgetError rather than sampling when the subset count exceeds
/// the budget.
inline VertexEnumeration enumerate_vertices(const LpProblem& problem, double budget = 1e6) {
    validate(problem);
    const std::size_t n = problem.variable_count;
    const std::size_t m = problem.constraints.size();
    const double combos = oracle_detail::binomial(m + n, n) + oracle_detail::binomial(m + 1 + n, n);
    if (combos > budget) throw EnumerationBudgetError(combos, budget);

    constexpr double feas_tol = 1e-7;
    VertexEnumeration result;
    const auto basic = oracle_detail::enumerate_basic_feasible(problem, feas_tol);
    result.feasible_vertex_count = basic.points.size();
    if (basic.points.empty()) {
        result.status = SolveStatus::Infeasible;
        return result;
    }

    // recession directions: homogeneous rows plus the normalization sum d = 1
    LpProblem recession;
    recession.variable_count = n;
    recession.objective = problem.objective;
    for (const Constraint& c : problem.constraints) recession.add_constraint(c.coeffs, c.sense, 0.0);
    recession.add_constraint(std::vector<double>(n, 1.0), Sense::Equal, 1.0);
    const auto rays = oracle_detail::enumerate_basic_feasible(recession, feas_tol);
    for (const auto& d : rays.points) {
        double cd = 0.0;
        for (std::size_t j = 0; j < n; ++j) cd += problem.objective[j] * d[j];
        if (cd < -1e-9) {
            result.status = SolveStatus::Unbounded;
            return result;
        }
    }

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < basic.points.size(); ++k) {
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) z += problem.objective[j] * basic.points[k][j];
        if (z < best) best = z;
    }
    for (std::size_t k = 0; k < basic.points.size(); ++k) {
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) z += problem.objective[j] * basic.points[k][j];
        if (z <= best + 1e-6) {
            result.optimal_vertices.push_back(basic.points[k]);
            result.condition_estimate = std::max(result.condition_estimate, basic.conditions[k]);
        }
    }
    result.status = SolveStatus::Optimal;
    result.objective = best;
    return result;
}

struct Violation {
    std::string constraint;
    double violation = 0.0;  // how far past the bound
    double slack = 0.0;      // signed distance to the bound (negative when violated)
};

struct ViolationReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }

    std::string to_string() const {
        std::string out;
        for (const Violation& v : violations)
            out += v.constraint + ": violated by " + csv::format_double(v.violation) +
                   " (slack " + csv::format_double(v.slack) + ")\n";
        return out;
    }
};

/// Re-derives every scenario constraint straight from the catalog tables and
/// evaluates the plan against them; deliberately shares no code with
/// build_lp. An empty report means feasible within 1e-6.
inline ViolationReport check_plan(const Catalog& catalog, const DietLpSpec& spec, const DietPlan& plan) {
    constexpr double tol = 1e-6;
    ViolationReport report;

    std::vector<double> weights(catalog.ingredients.size(), 0.0);
    for (const PlanEntry& entry : plan.entries) {
        std::size_t idx = catalog.ingredients.size();
        for (std::size_t i = 0; i < catalog.ingredients.size(); ++i)
            if (catalog.ingredients[i].id == entry.id) {
                idx = i;
                break;
            }
        if (idx == catalog.ingredients.size())
            throw std::runtime_error("check_plan: unknown ingredient '" + entry.name + "' (id " +
                                     std::to_string(entry.id) + ")");
        weights[idx] = entry.weight_g;
        if (entry.weight_g < -tol)
            report.violations.push_back({"non-negativity " + entry.name, -entry.weight_g, entry.weight_g});
    }

    // bounds, with the spec's overrides merged in (independently of diet_model)
    for (const std::string& key : catalog.nutrient_keys) {
        std::optional<double> lo, hi;
        for (const NutrientBound& b : catalog.bounds)
            if (b.key == key) {
                lo = b.min_value;
                hi = b.max_value;
            }
        const auto ov = spec.bound_overrides.find(key);
        if (ov != spec.bound_overrides.end()) {
            if (ov->second.min_value) lo = ov->second.min_value;
            if (ov->second.max_value) hi = ov->second.max_value;
        }
        if (!lo && !hi) continue;
        double total = 0.0;
        for (std::size_t i = 0; i < catalog.ingredients.size(); ++i) {
            const auto it = catalog.ingredients[i].nutrients.find(key);
            if (it != catalog.ingredients[i].nutrients.end()) total += weights[i] * it->second;
        }
        if (lo && total < *lo - tol)
            report.violations.push_back({"min " + key, *lo - total, total - *lo});
        if (hi && total > *hi + tol)
            report.violations.push_back({"max " + key, total - *hi, *hi - total});
    }

    if (spec.diversity_fraction < 1.0) {
        double total_weight = 0.0;
        for (double w : weights) total_weight += w;
        const double cap = spec.diversity_fraction * total_weight;
        for (std::size_t i = 0; i < catalog.ingredients.size(); ++i) {
            if (spec.diversity_positive_price_only &&
                !(catalog.ingredients[i].price_per_gram.value_or(0.0) > 0.0))
                continue;
            if (weights[i] > cap + tol)
                report.violations.push_back(
                    {"diversity " + catalog.ingredients[i].name, weights[i] - cap, cap - weights[i]});
        }
    }
    return report;
}

/// Seven synthetic ingredients over five nutrients, all small integers,
/// feasible for every scenario preset and small enough that enumerate_vertices
/// can audit each of them. The same data ships as CSVs under data/toy/.
inline Catalog toy_catalog() {
    const std::vector<std::string> keys = {"calories (kcal)", "protein (g)", "iron (mg)",
                                           "vitamin_d (IU)", "vitamin_c (mg)"};
    struct Row {
        const char* name;
        double price;
        double n[5];
    };
    const Row rows[] = {
        {"Grain meal", 1, {4, 1, 0, 0, 0}},
        {"Bean mash", 2, {3, 2, 1, 0, 0}},
        {"Fish oil blend", 7, {9, 0, 0, 100, 0}},
        {"Sun mushroom", 4, {1, 0, 0, 25, 0}},
        {"Liver spread", 5, {2, 2, 2, 1, 0}},
        {"Citrus syrup", 3, {2, 0, 0, 0, 2}},
        {"Root starch", 1, {3, 0, 0, 0, 0}},
    };
    std::vector<Ingredient> ingredients;
    int id = 0;
    for (const Row& r : rows) {
        Ingredient ing;
        ing.id = id++;
        ing.name = r.name;
        ing.price_per_gram = r.price;
        for (std::size_t k = 0; k < keys.size(); ++k) ing.nutrients[keys[k]] = r.n[k];
        ingredients.push_back(std::move(ing));
    }
    std::vector<NutrientBound> bounds = {
        {"calories (kcal)", 500.0, 2000.0, "kcal"},
        {"protein (g)", 20.0, 200.0, "g"},
        {"iron (mg)", 5.0, 120.0, "mg"},
        {"vitamin_d (IU)", 400.0, 12000.0, "IU"},
        {"vitamin_c (mg)", 75.0, 2000.0, "mg"},
    };
    return make_catalog(std::move(ingredients), std::move(bounds), keys);
}

}  // namespace mealsolve
