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

#include "mealsolve/ingest.hpp"
#include "mealsolve/oracle.hpp"
#include "test_support.hpp"

using namespace mealsolve;
using mealsolve::testing::TempDir;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("load_nutrition reads per-gram rows as-is") {
    TempDir tmp;
    const std::string path = tmp.file("nutrition.csv",
                                      "name,serving_size (g),calories (kcal),total_fat (g)\n"
                                      "Cornstarch,1.0,3.81,0.001\n");
    NutritionData data = load_nutrition(path);
    REQUIRE(data.ingredients.size() == 1);
    const Ingredient& ing = data.ingredients[0];
    CHECK(ing.id == 0);
    CHECK(ing.name == "Cornstarch");
    CHECK_THAT(ing.nutrients.at("calories (kcal)"), WithinAbs(3.81, 1e-12));
    CHECK(data.nutrient_keys == std::vector<std::string>{"calories (kcal)", "total_fat (g)"});
    CHECK(data.report.imputed_counts.empty());
}

TEST_CASE("load_nutrition normalizes non-unit serving sizes per gram") {
    TempDir tmp;
    const std::string path = tmp.file("nutrition.csv",
                                      "name,serving_size (g),calories (kcal)\n"
                                      "Cornstarch,100,381\n");
    NutritionData data = load_nutrition(path);
    CHECK_THAT(data.ingredients[0].nutrients.at("calories (kcal)"), WithinAbs(3.81, 1e-12));
    CHECK(data.ingredients[0].serving_size == 1.0);
}

TEST_CASE("per-gram normalization: scaled rows load identically") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> value(0.0, 50.0);
    std::uniform_real_distribution<double> scale(0.1, 400.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double cal = value(rng), fat = value(rng), s = scale(rng);
        TempDir tmp;
        const std::string base =
            tmp.file("base.csv", "name,serving_size (g),calories (kcal),fat (g)\n"
                                 "X,1," + csv::format_double(cal) + "," + csv::format_double(fat) + "\n");
        const std::string scaled =
            tmp.file("scaled.csv", "name,serving_size (g),calories (kcal),fat (g)\n"
                                   "X," + csv::format_double(s) + "," + csv::format_double(cal * s) +
                                   "," + csv::format_double(fat * s) + "\n");
        const Ingredient a = load_nutrition(base).ingredients[0];
        const Ingredient b = load_nutrition(scaled).ingredients[0];
        CHECK_THAT(b.nutrients.at("calories (kcal)"),
                   WithinRel(a.nutrients.at("calories (kcal)"), 1e-12));
        CHECK_THAT(b.nutrients.at("fat (g)"), WithinRel(a.nutrients.at("fat (g)"), 1e-12));
    }
}

TEST_CASE("load_nutrition error paths") {
    TempDir tmp;
    SECTION("missing mandatory column") {
        const std::string path = tmp.file("bad.csv", "name,calories (kcal)\nA,1\n");
        CHECK_THROWS_WITH(load_nutrition(path), ContainsSubstring("serving_size (g)"));
    }
    SECTION("negative value names the row and column") {
        const std::string path = tmp.file("bad.csv",
                                          "name,serving_size (g),calories (kcal)\nA,1,-3\n");
        CHECK_THROWS_WITH(load_nutrition(path),
                          ContainsSubstring("row 1") && ContainsSubstring("calories (kcal)"));
    }
    SECTION("duplicate names are listed") {
        const std::string path = tmp.file("bad.csv",
                                          "name,serving_size (g),calories (kcal)\n"
                                          "A,1,1\nB,1,2\n A  ,1,3\n");
        CHECK_THROWS_WITH(load_nutrition(path), ContainsSubstring("duplicate") && ContainsSubstring("A"));
    }
    SECTION("zero serving size") {
        const std::string path = tmp.file("bad.csv", "name,serving_size (g),calories (kcal)\nA,0,1\n");
        CHECK_THROWS_WITH(load_nutrition(path), ContainsSubstring("serving_size"));
    }
}

TEST_CASE("empty cells impute zero and are counted in the load report") {
    TempDir tmp;
    const std::string path = tmp.file("nutrition.csv",
                                      "name,serving_size (g),calories (kcal),fat (g)\n"
                                      "A,1,,2\n"
                                      "B,1,5,\n"
                                      "C,1,,1\n");
    NutritionData data = load_nutrition(path);
    CHECK(data.ingredients[0].nutrients.at("calories (kcal)") == 0.0);
    CHECK(data.report.imputed_counts.at("calories (kcal)") == 2);
    CHECK(data.report.imputed_counts.at("fat (g)") == 1);
    CHECK_THAT(data.report.summary(), ContainsSubstring("calories (kcal): 2 imputed"));
}

TEST_CASE("load_prices joins by normalized name and reports both mismatch sides") {
    TempDir tmp;
    const std::string npath = tmp.file("n.csv",
                                       "name,serving_size (g),calories (kcal)\n"
                                       "\"McDONALD'S, BIG MAC\",1.0,2.57\n"
                                       "\"KEEBLER, Iced Oatmeal Cookies\",1.0,4.67\n"
                                       "Unpriced thing,1.0,1\n");
    const std::string ppath = tmp.file("p.csv",
                                       "name,price_per_unit\n"
                                       "\"McDONALD'S, BIG MAC\",0.004992\n"
                                       "\"KEEBLER, Iced Oatmeal Cookies\",0.004513\n"
                                       "Phantom item,0.5\n");
    NutritionData data = load_nutrition(npath);
    PriceJoin join = load_prices(ppath, data.ingredients);

    REQUIRE(join.priced.size() == 2);
    CHECK(join.priced[0].name == "McDONALD'S, BIG MAC");
    CHECK_THAT(join.priced[0].price_per_gram.value(), WithinAbs(0.004992, 1e-12));
    CHECK_THAT(join.priced[1].price_per_gram.value(), WithinAbs(0.004513, 1e-12));
    CHECK(join.priced[0].id == 0);
    CHECK(join.priced[1].id == 1);  // ids stay stable through the join

    CHECK(join.report.unpriced_ingredients == std::vector<std::string>{"Unpriced thing"});
    CHECK(join.report.unmatched_prices == std::vector<std::string>{"Phantom item"});
    // join totality: matched + unpriced covers every nutrition row
    CHECK(join.priced.size() + join.report.unpriced_ingredients.size() == data.ingredients.size());
}

TEST_CASE("load_bounds parses optional sides") {
    TempDir tmp;
    const std::string path = tmp.file("b.csv",
                                      "nutrient,min_value,max_value\n"
                                      "vitamin_d (IU),600,4000\n"
                                      "sodium (mg),500,2000\n"
                                      "caffeine (mg),,400\n");
    std::vector<NutrientBound> bounds = load_bounds(path);
    REQUIRE(bounds.size() == 3);
    CHECK(bounds[0].key == "vitamin_d (IU)");
    CHECK(bounds[0].min_value == 600.0);
    CHECK(bounds[0].max_value == 4000.0);
    CHECK(bounds[0].unit == "IU");
    CHECK(bounds[1].min_value == 500.0);
    CHECK(bounds[1].max_value == 2000.0);
    CHECK_FALSE(bounds[2].min_value.has_value());
    CHECK(bounds[2].max_value == 400.0);
}

TEST_CASE("load_bounds error paths") {
    TempDir tmp;
    SECTION("min above max") {
        const std::string path = tmp.file("b.csv", "nutrient,min_value,max_value\nx,5,1\n");
        CHECK_THROWS_WITH(load_bounds(path), ContainsSubstring("exceeds"));
    }
    SECTION("both sides blank") {
        const std::string path = tmp.file("b.csv", "nutrient,min_value,max_value\nx,,\n");
        CHECK_THROWS_AS(load_bounds(path), std::runtime_error);
    }
    SECTION("negative minimum") {
        const std::string path = tmp.file("b.csv", "nutrient,min_value,max_value\nx,-1,5\n");
        CHECK_THROWS_WITH(load_bounds(path), ContainsSubstring(">= 0"));
    }
}

TEST_CASE("make_catalog rejects bound keys missing from the nutrition columns") {
    TempDir tmp;
    const std::string npath = tmp.file("n.csv", "name,serving_size (g),calories (kcal)\nA,1,2\n");
    const std::string ppath = tmp.file("p.csv", "name,price_per_unit\nA,1\n");
    const std::string bpath = tmp.file("b.csv", "nutrient,min_value,max_value\nunobtainium (g),1,2\n");
    CHECK_THROWS_WITH(load_catalog(npath, ppath, bpath), ContainsSubstring("unobtainium (g)"));
}

TEST_CASE("catalog round-trips through the three CSV files") {
    const Catalog original = toy_catalog();
    TempDir tmp;
    write_nutrition(tmp.path("n.csv"), original);
    write_prices(tmp.path("p.csv"), original);
    write_bounds(tmp.path("b.csv"), original.bounds);
    const LoadedCatalog reloaded = load_catalog(tmp.path("n.csv"), tmp.path("p.csv"), tmp.path("b.csv"));
    CHECK(reloaded.catalog == original);

    // and once more, from the reloaded copy
    TempDir tmp2;
    write_nutrition(tmp2.path("n.csv"), reloaded.catalog);
    write_prices(tmp2.path("p.csv"), reloaded.catalog);
    write_bounds(tmp2.path("b.csv"), reloaded.catalog.bounds);
    CHECK(load_catalog(tmp2.path("n.csv"), tmp2.path("p.csv"), tmp2.path("b.csv")).catalog == original);
}

TEST_CASE("round-trip preserves awkward names and fractional values") {
    Catalog cat;
    cat.nutrient_keys = {"calories (kcal)", "odd \"quoted\" (g)"};
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> v(0.0, 10.0);
    const char* names[] = {"Comma, included", "  padded  name ", "quote \"x\"", "plain"};
    int id = 0;
    for (const char* n : names) {
        Ingredient ing;
        ing.id = id++;
        ing.name = normalize_name(n);
        ing.price_per_gram = v(rng);
        for (const auto& key : cat.nutrient_keys) ing.nutrients[key] = v(rng);
        cat.ingredients.push_back(std::move(ing));
    }
    cat.bounds.push_back({"calories (kcal)", 0.123456789012345, std::nullopt, "kcal"});

    TempDir tmp;
    write_nutrition(tmp.path("n.csv"), cat);
    write_prices(tmp.path("p.csv"), cat);
    write_bounds(tmp.path("b.csv"), cat.bounds);
    CHECK(load_catalog(tmp.path("n.csv"), tmp.path("p.csv"), tmp.path("b.csv")).catalog == cat);
}

TEST_CASE("normalize_name trims and collapses whitespace without case folding") {
    CHECK(normalize_name("  Nuts,   pecans \t") == "Nuts, pecans");
    CHECK(normalize_name("McDONALD'S") == "McDONALD'S");  // case preserved
    CHECK(normalize_name("a b") == "a b");
}
