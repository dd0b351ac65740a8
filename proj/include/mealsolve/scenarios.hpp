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
#include <stdexcept>
#include <string>
#include <vector>

#include "mealsolve/diet_model.hpp"
#include "mealsolve/ingest.hpp"
#include "mealsolve/lp_core.hpp"

namespace mealsolve {

struct ScenarioPreset {
    std::string id;
    std::string description;
    DietLpSpec spec;
};

inline const std::vector<std::string>& scenario_ids() {
    static const std::vector<std::string> ids = {"optimal",        "vitamin_d",    "iron",
                                                 "calorie_deficit", "high_protein", "gods_diet"};
    return ids;
}

/// The six named presets. Each override replaces one nutrient's daily range;
/// gods_diet instead switches to the lexicographic objective that maxes the
/// raw nutrient sum first and minimizes price second.
inline ScenarioPreset preset(const std::string& id) {
    ScenarioPreset p;
    p.id = id;
    if (id == "optimal") {
        p.description = "least-cost plan under the catalog bounds";
    } else if (id == "vitamin_d") {
        p.description = "raised vitamin D intake, 6000-10000 IU daily";
        p.spec.bound_overrides["vitamin_d (IU)"] = {6000.0, 10000.0};
    } else if (id == "iron") {
        p.description = "raised iron intake, 80-100 mg daily";
        p.spec.bound_overrides["iron (mg)"] = {80.0, 100.0};
    } else if (id == "calorie_deficit") {
        p.description = "calorie-restricted plan, 1000-1500 kcal daily";
        p.spec.bound_overrides["calories (kcal)"] = {1000.0, 1500.0};
    } else if (id == "high_protein") {
        p.description = "protein-rich plan, 128-184.8 g daily";
        p.spec.bound_overrides["protein (g)"] = {128.0, 184.8};
    } else if (id == "gods_diet") {
        p.description = "maximize total nutrient content within bounds, then minimize price";
        p.spec.objective_mode = ObjectiveMode::MaxNutrientsThenCost;
    } else {
        std::string valid;
        for (const std::string& v : scenario_ids()) valid += (valid.empty() ? "" : ", ") + v;
        throw std::invalid_argument("unknown scenario '" + id + "' (valid: " + valid + ")");
    }
    return p;
}

struct RunOptions {
    // Swaps the two gods_diet objectives: price becomes primary, nutrient sum
    // secondary. No effect on cost-min scenarios.
    bool swap_priorities = false;
    SolverOptions solver;
};

struct ScenarioRun {
    DietPlan plan;       // populated when solution.status == Optimal
    Solution solution;
    LpProblem problem;   // the program the solution certifies against
                         // (stage-2 program for lexicographic runs)
};

/// Per-ingredient raw nutrient sums, sum_k N_ik, the gods_diet primary.
inline std::vector<double> nutrient_sum_vector(const Catalog& catalog) {
    std::vector<double> q;
    q.reserve(catalog.ingredients.size());
    for (const Ingredient& ing : catalog.ingredients) {
        double s = 0.0;
        for (const auto& [key, amount] : ing.nutrients) s += amount;
        q.push_back(s);
    }
    return q;
}

inline ScenarioRun run_scenario(const Catalog& catalog, const ScenarioPreset& preset,
                                const RunOptions& options = {}) {
    ScenarioRun run;
    LpProblem lp = build_lp(catalog, preset.spec);

    if (preset.spec.objective_mode == ObjectiveMode::CostMin) {
        run.solution = solve(lp, options.solver);
        run.problem = std::move(lp);
    } else {
        const std::vector<double> nutrients = nutrient_sum_vector(catalog);
        const std::vector<double>& prices = lp.objective;

        LexicographicSpec lex;
        if (!options.swap_priorities) {
            lex.primary = nutrients;
            lex.primary_direction = Direction::Maximize;
            lex.secondary = prices;
            lex.secondary_direction = Direction::Minimize;
        } else {
            lex.primary = prices;
            lex.primary_direction = Direction::Minimize;
            lex.secondary = nutrients;
            lex.secondary_direction = Direction::Maximize;
        }

        // Stage 1 is solved once up front to size the degradation tolerance.
        LpProblem stage1 = lp;
        stage1.objective = lex.primary;
        if (lex.primary_direction == Direction::Maximize)
            for (double& v : stage1.objective) v = -v;
        Solution first = solve(stage1, options.solver);
        if (first.status != SolveStatus::Optimal) {
            run.solution = std::move(first);
            run.problem = std::move(lp);
            return run;
        }
        const double z1 = lex.primary_direction == Direction::Maximize ? -first.objective_value
                                                                       : first.objective_value;
        // Relative slack keeps the stage-2 cut numerically safe. The swapped
        // order is a consistency diagnostic and must reproduce the stage-1
        // vertex to ~1e-9, so it gets an absolute, near-zero slack instead.
        lex.degradation_tolerance = options.swap_priorities ? 1e-9 + 1e-12 * std::fabs(z1)
                                                            : 1e-6 * std::fabs(z1) + 1e-9;

        run.solution = solve_lexicographic(lp, lex, options.solver);
        run.problem = append_level_constraint(lp, lex.primary, lex.primary_direction, z1,
                                              lex.degradation_tolerance);
        run.problem.objective = lex.secondary;
        if (lex.secondary_direction == Direction::Maximize)
            for (double& v : run.problem.objective) v = -v;
    }

    if (run.solution.status == SolveStatus::Optimal)
        run.plan = extract_plan(catalog, run.solution);
    return run;
}

}  // namespace mealsolve
