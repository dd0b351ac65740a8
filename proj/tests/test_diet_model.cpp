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

#include <catch2/catch_amalgamated.hpp>

#include "mealsolve/diet_model.hpp"
#include "mealsolve/oracle.hpp"
#include "mealsolve/scenarios.hpp"
#include "test_support.hpp"

using namespace mealsolve;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Catalog three_ingredient_catalog() {
    Catalog cat;
    cat.nutrient_keys = {"calories (kcal)", "protein (g)"};
    struct Row {
        const char* name;
        double price, cal, prot;
    };
    for (const Row& r : {Row{"A", 1.0, 2.0, 1.0}, Row{"B", 2.0, 3.0, 0.5}, Row{"C", 3.0, 1.0, 2.0}}) {
        Ingredient ing;
        ing.id = static_cast<int>(cat.ingredients.size());
        ing.name = r.name;
        ing.price_per_gram = r.price;
        ing.nutrients = {{"calories (kcal)", r.cal}, {"protein (g)", r.prot}};
        cat.ingredients.push_back(std::move(ing));
    }
    cat.bounds = {{"calories (kcal)", 10.0, 50.0, "kcal"}, {"protein (g)", 4.0, 20.0, "g"}};
    return cat;
}

}  // namespace

TEST_CASE("build_lp: rows, senses, and diversity coefficients") {
    const Catalog cat = three_ingredient_catalog();
    DietLpSpec spec;  // f = 1/5
    const LpProblem lp = build_lp(cat, spec);

    REQUIRE(lp.variable_count == 3);
    REQUIRE(lp.constraints.size() == 4 + 3);  // two double-sided bounds + 3 diversity rows
    CHECK(lp.objective == std::vector<double>{1.0, 2.0, 3.0});

    CHECK(lp.constraints[0].sense == Sense::GreaterEqual);
    CHECK(lp.constraints[0].rhs == 10.0);
    CHECK(lp.constraints[0].coeffs == std::vector<double>{2.0, 3.0, 1.0});
    CHECK(lp.constraints[1].sense == Sense::LessEqual);
    CHECK(lp.constraints[1].rhs == 50.0);

    for (std::size_t i = 0; i < 3; ++i) {
        const Constraint& row = lp.constraints[4 + i];
        CHECK(row.sense == Sense::LessEqual);
        CHECK(row.rhs == 0.0);
        for (std::size_t j = 0; j < 3; ++j)
            CHECK_THAT(row.coeffs[j], WithinAbs(i == j ? 0.8 : -0.2, 1e-15));
    }
    CHECK(lp.constraint_names[4] == "diversity A");
}

TEST_CASE("build_lp: overrides replace the bound sides") {
    Catalog cat = toy_catalog();
    DietLpSpec spec;
    spec.bound_overrides["vitamin_d (IU)"] = {6000.0, 10000.0};
    const LpProblem lp = build_lp(cat, spec);

    bool saw_min = false, saw_max = false;
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        if (lp.constraint_names[i] == "min vitamin_d (IU)") {
            saw_min = true;
            CHECK(lp.constraints[i].rhs == 6000.0);
        }
        if (lp.constraint_names[i] == "max vitamin_d (IU)") {
            saw_max = true;
            CHECK(lp.constraints[i].rhs == 10000.0);
        }
    }
    CHECK(saw_min);
    CHECK(saw_max);
}

TEST_CASE("build_lp: a single-sided override keeps the catalog's other side") {
    Catalog cat = toy_catalog();
    DietLpSpec spec;
    spec.bound_overrides["calories (kcal)"] = {BoundOverride{900.0, std::nullopt}};
    const auto merged = effective_bounds(cat, spec);
    for (const NutrientBound& b : merged)
        if (b.key == "calories (kcal)") {
            CHECK(b.min_value == 900.0);
            CHECK(b.max_value == 2000.0);  // catalog side preserved
        }
}

TEST_CASE("build_lp: override for an unbounded nutrition column adds rows") {
    Catalog cat = three_ingredient_catalog();
    cat.nutrient_keys.push_back("zinc (mg)");
    for (auto& ing : cat.ingredients) ing.nutrients["zinc (mg)"] = 1.0;
    DietLpSpec spec;
    spec.bound_overrides["zinc (mg)"] = {1.0, 2.0};
    const LpProblem lp = build_lp(cat, spec);
    REQUIRE(lp.constraints.size() == 4 + 2 + 3);
}

TEST_CASE("build_lp: diversity fraction of exactly 1 drops the rows") {
    const Catalog cat = three_ingredient_catalog();
    DietLpSpec spec;
    spec.diversity_fraction = 1.0;
    const LpProblem lp = build_lp(cat, spec);
    CHECK(lp.constraints.size() == 4);  // bounds only
}

TEST_CASE("build_lp error paths") {
    const Catalog cat = three_ingredient_catalog();
    SECTION("empty catalog") {
        CHECK_THROWS_AS(build_lp(Catalog{}, DietLpSpec{}), std::invalid_argument);
    }
    SECTION("override key absent from nutrition columns") {
        DietLpSpec spec;
        spec.bound_overrides["selenium (mcg)"] = {1.0, 2.0};
        CHECK_THROWS_WITH(build_lp(cat, spec),
                          Catch::Matchers::ContainsSubstring("selenium (mcg)"));
    }
    SECTION("diversity fraction out of range") {
        DietLpSpec spec;
        spec.diversity_fraction = 0.0;
        CHECK_THROWS_AS(build_lp(cat, spec), std::invalid_argument);
        spec.diversity_fraction = 1.5;
        CHECK_THROWS_AS(build_lp(cat, spec), std::invalid_argument);
    }
}

TEST_CASE("extract_plan: totals come from the full weight vector") {
    const Catalog cat = three_ingredient_catalog();
    Solution sol;
    sol.status = SolveStatus::Optimal;
    sol.weights = {4.0, 0.0, 2.0};
    const DietPlan plan = extract_plan(cat, sol);

    REQUIRE(plan.entries.size() == 2);
    CHECK(plan.entries[0].id == 0);
    CHECK(plan.entries[1].id == 2);
    CHECK_THAT(plan.total_weight, WithinAbs(6.0, 1e-12));
    CHECK_THAT(plan.total_cost, WithinAbs(4.0 * 1.0 + 2.0 * 3.0, 1e-12));      // hand sum
    CHECK_THAT(plan.nutrient_totals.at("calories (kcal)"), WithinAbs(10.0, 1e-12));
    CHECK_THAT(plan.nutrient_totals.at("protein (g)"), WithinAbs(8.0, 1e-12));
}

TEST_CASE("extract_plan: all-zero weights give an empty plan") {
    Catalog cat = three_ingredient_catalog();
    cat.bounds.clear();  // nothing forces a positive diet
    Solution sol;
    sol.status = SolveStatus::Optimal;
    sol.weights = {0.0, 0.0, 0.0};
    const DietPlan plan = extract_plan(cat, sol);
    CHECK(plan.entries.empty());
    CHECK(plan.total_weight == 0.0);
    CHECK(plan.total_cost == 0.0);
}

TEST_CASE("extract_plan rejects non-optimal solutions") {
    Solution sol;
    sol.status = SolveStatus::Infeasible;
    CHECK_THROWS_AS(extract_plan(three_ingredient_catalog(), sol), std::invalid_argument);
}

TEST_CASE("plan invariants hold on a real solve") {
    const Catalog cat = toy_catalog();
    const ScenarioRun run = run_scenario(cat, preset("optimal"));
    REQUIRE(run.solution.status == SolveStatus::Optimal);
    const DietPlan& plan = run.plan;

    double weight = 0.0, cost = 0.0;
    std::map<std::string, double> totals;
    for (std::size_t i = 0; i < cat.ingredients.size(); ++i) {
        weight += run.solution.weights[i];
        cost += run.solution.weights[i] * cat.ingredients[i].price_per_gram.value();
        for (const auto& [k, v] : cat.ingredients[i].nutrients)
            totals[k] += run.solution.weights[i] * v;
    }
    CHECK_THAT(plan.total_weight, WithinAbs(weight, 1e-6));
    CHECK_THAT(plan.total_cost, WithinRel(cost, 1e-9));
    for (const auto& [k, v] : totals)
        CHECK_THAT(plan.nutrient_totals.at(k), WithinRel(v, 1e-6));

    // evaluating the returned weights against the rebuilt program reproduces
    // the objective
    const LpProblem lp = build_lp(cat, preset("optimal").spec);
    double z = 0.0;
    for (std::size_t j = 0; j < lp.variable_count; ++j) z += lp.objective[j] * run.solution.weights[j];
    CHECK_THAT(z, WithinRel(run.solution.objective_value, 1e-9));
}

TEST_CASE("diversity forces at least ceil(1/f) supported ingredients") {
    const Catalog cat = toy_catalog();
    for (const std::string& id : scenario_ids()) {
        const ScenarioRun run = run_scenario(cat, preset(id));
        REQUIRE(run.solution.status == SolveStatus::Optimal);
        if (run.plan.total_weight <= 0.0) continue;
        std::size_t support = 0;
        for (const PlanEntry& e : run.plan.entries)
            if (e.weight_g > 1e-6) ++support;
        INFO("scenario " << id);
        CHECK(support >= 5);
    }
}
