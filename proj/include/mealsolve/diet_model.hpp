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
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mealsolve/ingest.hpp"
#include "mealsolve/lp_core.hpp"

namespace mealsolve {

enum class ObjectiveMode { CostMin, MaxNutrientsThenCost };

/// Replaces a catalog bound for one nutrient. A side left empty falls back to
/// the catalog's value for that side.
struct BoundOverride {
    std::optional<double> min_value;
    std::optional<double> max_value;
};

/// Everything that turns a catalog into a concrete program: the diversity
/// fraction (no ingredient may exceed this share of total weight), per-
/// nutrient bound overrides, and the objective mode.
struct DietLpSpec {
    double diversity_fraction = 0.2;  // in (0, 1]; 1 disables the restriction
    std::map<std::string, BoundOverride> bound_overrides;
    ObjectiveMode objective_mode = ObjectiveMode::CostMin;
    // Restricts diversity rows to ingredients with price > 0. Experimental
    // knob; the default emits one row per ingredient.
    bool diversity_positive_price_only = false;
};

/// Catalog bounds with the spec's overrides applied. Overridden keys keep
/// their catalog position; overrides for unbounded keys are appended.
inline std::vector<NutrientBound> effective_bounds(const Catalog& catalog, const DietLpSpec& spec) {
    for (const auto& [key, ov] : spec.bound_overrides) {
        if (std::find(catalog.nutrient_keys.begin(), catalog.nutrient_keys.end(), key) ==
            catalog.nutrient_keys.end())
            throw std::invalid_argument("override key '" + key + "' is not a nutrition column");
        if (!ov.min_value && !ov.max_value)
            throw std::invalid_argument("override for '" + key + "' has neither side");
    }
    std::vector<NutrientBound> out;
    std::set<std::string> seen;
    for (const NutrientBound& b : catalog.bounds) {
        seen.insert(b.key);
        const auto it = spec.bound_overrides.find(b.key);
        if (it == spec.bound_overrides.end()) {
            out.push_back(b);
            continue;
        }
        NutrientBound merged = b;
        if (it->second.min_value) merged.min_value = it->second.min_value;
        if (it->second.max_value) merged.max_value = it->second.max_value;
        out.push_back(std::move(merged));
    }
    for (const auto& [key, ov] : spec.bound_overrides) {
        if (seen.count(key)) continue;
        NutrientBound b;
        b.key = key;
        b.unit = unit_of_key(key);
        b.min_value = ov.min_value;
        b.max_value = ov.max_value;
        out.push_back(std::move(b));
    }
    return out;
}

/// Builds the cost-minimization program: objective = price per gram, one >=
/// row per bounded-below nutrient, one <= row per bounded-above nutrient, and
/// one diversity row per ingredient,
///     w_i - f * sum_j w_j <= 0,
/// i.e. coefficient 1 - f on ingredient i and -f elsewhere. With f == 1 the
/// rows are vacuous and omitted.
inline LpProblem build_lp(const Catalog& catalog, const DietLpSpec& spec) {
    if (catalog.ingredients.empty()) throw std::invalid_argument("build_lp: empty catalog");
    if (!(spec.diversity_fraction > 0.0) || spec.diversity_fraction > 1.0)
        throw std::invalid_argument("build_lp: diversity_fraction must be in (0, 1]");

    const std::size_t n = catalog.ingredients.size();
    LpProblem lp;
    lp.variable_count = n;
    lp.objective.reserve(n);
    lp.variable_names.reserve(n);
    for (const Ingredient& ing : catalog.ingredients) {
        lp.objective.push_back(ing.price_per_gram.value());
        lp.variable_names.push_back(ing.name);
    }

    for (const NutrientBound& b : effective_bounds(catalog, spec)) {
        std::vector<double> row(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto it = catalog.ingredients[i].nutrients.find(b.key);
            row[i] = it == catalog.ingredients[i].nutrients.end() ? 0.0 : it->second;
        }
        if (b.min_value) lp.add_constraint(row, Sense::GreaterEqual, *b.min_value, "min " + b.key);
        if (b.max_value) lp.add_constraint(std::move(row), Sense::LessEqual, *b.max_value, "max " + b.key);
    }

    const double f = spec.diversity_fraction;
    if (f < 1.0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (spec.diversity_positive_price_only && !(catalog.ingredients[i].price_per_gram.value() > 0.0))
                continue;
            std::vector<double> row(n, -f);
            row[i] = 1.0 - f;
            lp.add_constraint(std::move(row), Sense::LessEqual, 0.0,
                              "diversity " + catalog.ingredients[i].name);
        }
    }
    return lp;
}

struct PlanEntry {
    int id = 0;
    std::string name;
    double weight_g = 0.0;

    bool operator==(const PlanEntry&) const = default;
};

/// Weights below this many grams are numerical zeros and stay out of the
/// rendered plan; totals are always computed from the full weight vector.
inline constexpr double display_threshold = 1e-6;

struct DietPlan {
    std::vector<PlanEntry> entries;  // weight > display_threshold, ascending id
    double total_cost = 0.0;
    double total_weight = 0.0;  // grams
    std::map<std::string, double> nutrient_totals;
};

inline DietPlan extract_plan(const Catalog& catalog, const Solution& solution) {
    if (solution.status != SolveStatus::Optimal)
        throw std::invalid_argument("extract_plan: solution status must be Optimal");
    if (solution.weights.size() != catalog.ingredients.size())
        throw std::invalid_argument("extract_plan: solution does not match catalog size");

    DietPlan plan;
    for (const std::string& key : catalog.nutrient_keys) plan.nutrient_totals[key] = 0.0;
    for (std::size_t i = 0; i < catalog.ingredients.size(); ++i) {
        const Ingredient& ing = catalog.ingredients[i];
        const double w = solution.weights[i];
        plan.total_weight += w;
        plan.total_cost += w * ing.price_per_gram.value();
        for (const auto& [key, amount] : ing.nutrients) plan.nutrient_totals[key] += w * amount;
        if (w > display_threshold) plan.entries.push_back({ing.id, ing.name, w});
    }
    return plan;
}

}  // namespace mealsolve
