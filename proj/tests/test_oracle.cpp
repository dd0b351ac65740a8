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

#include "mealsolve/oracle.hpp"
#include "mealsolve/scenarios.hpp"
#include "test_support.hpp"

using namespace mealsolve;
using mealsolve::testing::make_lp;
using Catch::Matchers::WithinAbs;

TEST_CASE("enumerate_vertices: single bound") {
    LpProblem p = make_lp(1, {1.0});
    p.add_constraint({1.0}, Sense::GreaterEqual, 2.0);
    VertexEnumeration ve = enumerate_vertices(p);
    REQUIRE(ve.status == SolveStatus::Optimal);
    CHECK_THAT(ve.objective, WithinAbs(2.0, 1e-9));
}

TEST_CASE("enumerate_vertices: segment optimum lists both end vertices") {
    LpProblem p = make_lp(2, {1.0, 1.0});
    p.add_constraint({1.0, 1.0}, Sense::GreaterEqual, 4.0);
    p.add_constraint({1.0, 0.0}, Sense::LessEqual, 3.0);
    p.add_constraint({0.0, 1.0}, Sense::LessEqual, 3.0);
    VertexEnumeration ve = enumerate_vertices(p);
    REQUIRE(ve.status == SolveStatus::Optimal);
    CHECK_THAT(ve.objective, WithinAbs(4.0, 1e-9));

    auto contains = [&](double a, double b) {
        for (const auto& v : ve.optimal_vertices)
            if (std::fabs(v[0] - a) < 1e-7 && std::fabs(v[1] - b) < 1e-7) return true;
        return false;
    };
    CHECK(contains(1.0, 3.0));
    CHECK(contains(3.0, 1.0));
}

TEST_CASE("enumerate_vertices: statuses") {
    SECTION("infeasible") {
        LpProblem p = make_lp(1, {1.0});
        p.add_constraint({1.0}, Sense::LessEqual, -3.0);  // x <= -3 with x >= 0
        CHECK(enumerate_vertices(p).status == SolveStatus::Infeasible);
    }
    SECTION("unbounded via recession ray") {
        LpProblem p = make_lp(2, {-1.0, 0.0});
        p.add_constraint({0.0, 1.0}, Sense::LessEqual, 1.0);
        CHECK(enumerate_vertices(p).status == SolveStatus::Unbounded);
    }
    SECTION("no constraints at all") {
        LpProblem p = make_lp(1, {-1.0});
        CHECK(enumerate_vertices(p).status == SolveStatus::Unbounded);
        LpProblem q = make_lp(1, {1.0});
        VertexEnumeration ve = enumerate_vertices(q);
        REQUIRE(ve.status == SolveStatus::Optimal);
        CHECK_THAT(ve.objective, WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("enumerate_vertices refuses oversized instances") {
    LpProblem p = make_lp(20, std::vector<double>(20, 1.0));
    for (int i = 0; i < 20; ++i) p.add_constraint(std::vector<double>(20, 1.0), Sense::LessEqual, 1.0);
    CHECK_THROWS_AS(enumerate_vertices(p), EnumerationBudgetError);
}

TEST_CASE("check_plan: optimal scenario plans come back clean") {
    const Catalog catalog = toy_catalog();
    for (const std::string& id : scenario_ids()) {
        const ScenarioPreset pre = preset(id);
        const ScenarioRun run = run_scenario(catalog, pre);
        REQUIRE(run.solution.status == SolveStatus::Optimal);
        const ViolationReport report = check_plan(catalog, pre.spec, run.plan);
        INFO(id << ": " << report.to_string());
        CHECK(report.feasible());
    }
}

TEST_CASE("check_plan flags a constructed diversity violation") {
    const Catalog catalog = toy_catalog();
    DietLpSpec spec;  // f = 0.2
    DietPlan plan;
    plan.entries = {{0, "Grain meal", 30.0}, {1, "Bean mash", 20.0},
                    {6, "Root starch", 50.0}};  // grain 30% and root 50% of 100 g
    const ViolationReport report = check_plan(catalog, spec, plan);
    REQUIRE_FALSE(report.feasible());
    bool diversity_hit = false;
    for (const Violation& v : report.violations)
        if (v.constraint.rfind("diversity", 0) == 0) diversity_hit = true;
    CHECK(diversity_hit);
}

TEST_CASE("check_plan flags a halved plan against the calorie floor") {
    const Catalog catalog = toy_catalog();
    const ScenarioPreset pre = preset("optimal");
    ScenarioRun run = run_scenario(catalog, pre);
    REQUIRE(run.solution.status == SolveStatus::Optimal);
    DietPlan halved = run.plan;
    for (PlanEntry& e : halved.entries) e.weight_g *= 0.5;
    const ViolationReport report = check_plan(catalog, pre.spec, halved);
    REQUIRE_FALSE(report.feasible());
    bool min_hit = false;
    for (const Violation& v : report.violations) {
        if (v.constraint.rfind("min ", 0) == 0) min_hit = true;
        CHECK(v.violation > 0.0);
        CHECK(v.slack < 0.0);
    }
    CHECK(min_hit);
}

TEST_CASE("check_plan rejects unknown ingredients") {
    const Catalog catalog = toy_catalog();
    DietLpSpec spec;
    DietPlan plan;
    plan.entries = {{99, "Mystery paste", 10.0}};
    CHECK_THROWS_WITH(check_plan(catalog, spec, plan),
                      Catch::Matchers::ContainsSubstring("Mystery paste"));
}

TEST_CASE("check_plan and build_lp agree on feasibility") {
    const Catalog catalog = toy_catalog();
    DietLpSpec spec;
    const LpProblem lp = build_lp(catalog, spec);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> w(0.0, 80.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> weights(catalog.ingredients.size());
        for (double& v : weights) v = w(rng);
        DietPlan plan;
        for (std::size_t i = 0; i < weights.size(); ++i)
            plan.entries.push_back({catalog.ingredients[i].id, catalog.ingredients[i].name, weights[i]});

        bool lp_feasible = true;
        for (const Constraint& c : lp.constraints) {
            double act = 0.0;
            for (std::size_t j = 0; j < weights.size(); ++j) act += c.coeffs[j] * weights[j];
            if (c.sense == Sense::LessEqual && act > c.rhs + 1e-6) lp_feasible = false;
            if (c.sense == Sense::GreaterEqual && act < c.rhs - 1e-6) lp_feasible = false;
        }
        CHECK(check_plan(catalog, spec, plan).feasible() == lp_feasible);
    }
}

TEST_CASE("toy catalog matches its shipped CSV form") {
    const std::string dir = mealsolve::testing::data_dir() + "/toy";
    const LoadedCatalog loaded =
        load_catalog(dir + "/nutrition.csv", dir + "/prices.csv", dir + "/bounds.csv");
    CHECK(loaded.catalog == toy_catalog());
    CHECK(loaded.join_report.unpriced_ingredients.empty());
    CHECK(loaded.join_report.unmatched_prices.empty());
}
