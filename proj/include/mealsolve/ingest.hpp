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
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mealsolve/csv.hpp"

namespace mealsolve {

/// One food row. Nutrient amounts are stored per gram; rows whose file
/// serving size differs from 1 g are divided through at load, after which
/// serving_size reads 1.
struct Ingredient {
    int id = 0;  // stable row index in the nutrition file
    std::string name;
    double serving_size = 1.0;  // grams
    std::optional<double> price_per_gram;
    std::map<std::string, double> nutrients;  // key -> amount per gram

    bool operator==(const Ingredient&) const = default;
};

/// Daily bound for one nutrient; either side may be absent. The unit is the
/// parenthesized suffix of the key, when the key carries one.
struct NutrientBound {
    std::string key;
    std::optional<double> min_value;
    std::optional<double> max_value;
    std::string unit;

    bool operator==(const NutrientBound&) const = default;
};

struct Catalog {
    std::vector<Ingredient> ingredients;       // all priced
    std::vector<NutrientBound> bounds;
    std::vector<std::string> nutrient_keys;    // column order of the nutrition file

    bool operator==(const Catalog&) const = default;
};

struct LoadReport {
    std::map<std::string, std::size_t> imputed_counts;  // column -> empty cells read as 0

    std::string summary() const {
        std::string out;
        for (const auto& [key, count] : imputed_counts)
            out += key + ": " + std::to_string(count) + " imputed\n";
        return out;
    }
};

struct JoinReport {
    std::vector<std::string> unpriced_ingredients;  // nutrition rows without a price, excluded
    std::vector<std::string> unmatched_prices;      // price rows without a nutrition row
};

/// Trims and collapses internal whitespace runs. Case is preserved.
inline std::string normalize_name(const std::string& raw) {
    std::string out;
    bool pending_space = false;
    for (char c : raw) {
        if (c == ' ' || c == '\t') {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) out += ' ';
            pending_space = false;
            out += c;
        }
    }
    return out;
}

inline std::string unit_of_key(const std::string& key) {
    const std::size_t close = key.rfind(')');
    if (close == std::string::npos || close + 1 != key.size()) return "";
    const std::size_t open = key.rfind('(');
    if (open == std::string::npos || open > close) return "";
    return key.substr(open + 1, close - open - 1);
}

struct NutritionData {
    std::vector<Ingredient> ingredients;
    std::vector<std::string> nutrient_keys;
    LoadReport report;
};

/// Reads the nutrition table. Header must contain "name" and
/// "serving_size (g)"; every other column is a nutrient. Empty cells read as
/// zero and are counted per column in the load report.
inline NutritionData load_nutrition(const std::string& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw std::runtime_error(path + ": empty nutrition file");
    const auto& header = rows[0];

    int name_col = -1;
    int serving_col = -1;
    NutritionData data;
    std::vector<int> nutrient_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string key = normalize_name(header[c]);
        if (key == "name") {
            name_col = static_cast<int>(c);
        } else if (key == "serving_size (g)") {
            serving_col = static_cast<int>(c);
        } else {
            data.nutrient_keys.push_back(key);
            nutrient_cols.push_back(static_cast<int>(c));
        }
    }
    if (name_col < 0) throw std::runtime_error(path + ": missing mandatory column 'name'");
    if (serving_col < 0) throw std::runtime_error(path + ": missing mandatory column 'serving_size (g)'");

    std::map<std::string, std::vector<int>> by_name;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = path + ": row " + std::to_string(r);
        if (row.size() != header.size())
            throw std::runtime_error(where + ": expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(row.size()));
        Ingredient ing;
        ing.id = static_cast<int>(r - 1);
        ing.name = normalize_name(row[static_cast<std::size_t>(name_col)]);
        by_name[ing.name].push_back(ing.id);

        const double serving = csv::parse_double(row[static_cast<std::size_t>(serving_col)],
                                                 where + ", column 'serving_size (g)'");
        if (!(serving > 0.0) || !std::isfinite(serving))
            throw std::runtime_error(where + ": serving_size must be positive");

        for (std::size_t k = 0; k < nutrient_cols.size(); ++k) {
            const std::string& cell = row[static_cast<std::size_t>(nutrient_cols[k])];
            const std::string& key = data.nutrient_keys[k];
            double value = 0.0;
            if (csv::is_blank(cell)) {
                ++data.report.imputed_counts[key];
            } else {
                value = csv::parse_double(cell, where + ", column '" + key + "'");
                if (!std::isfinite(value))
                    throw std::runtime_error(where + ", column '" + key + "': non-finite value");
                if (value < 0.0)
                    throw std::runtime_error(where + ", column '" + key + "': negative value " + cell);
            }
            ing.nutrients[key] = value / serving;
        }
        ing.serving_size = 1.0;  // normalized above
        data.ingredients.push_back(std::move(ing));
    }

    std::string duplicates;
    for (const auto& [name, ids] : by_name)
        if (ids.size() > 1) duplicates += (duplicates.empty() ? "" : ", ") + name;
    if (!duplicates.empty())
        throw std::runtime_error(path + ": duplicate ingredient names: " + duplicates);
    return data;
}

struct PriceJoin {
    std::vector<Ingredient> priced;  // input ingredients that matched a price
    JoinReport report;
};

/// Joins prices (columns: name, price_per_unit in currency per gram) onto the
/// ingredient list by normalized name. Ingredients without a price are
/// excluded rather than given an invented one; both directions of mismatch
/// land in the join report.
inline PriceJoin load_prices(const std::string& path, const std::vector<Ingredient>& ingredients) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw std::runtime_error(path + ": empty prices file");
    const auto& header = rows[0];
    int name_col = -1;
    int price_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string key = normalize_name(header[c]);
        if (key == "name") name_col = static_cast<int>(c);
        else if (key == "price_per_unit") price_col = static_cast<int>(c);
    }
    if (name_col < 0) throw std::runtime_error(path + ": missing mandatory column 'name'");
    if (price_col < 0) throw std::runtime_error(path + ": missing mandatory column 'price_per_unit'");

    std::map<std::string, double> prices;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = path + ": row " + std::to_string(r);
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw std::runtime_error(where + ": expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(row.size()));
        const std::string name = normalize_name(row[static_cast<std::size_t>(name_col)]);
        const double price = csv::parse_double(row[static_cast<std::size_t>(price_col)],
                                               where + ", column 'price_per_unit'");
        if (!std::isfinite(price) || price < 0.0)
            throw std::runtime_error(where + ": price_per_unit must be finite and >= 0");
        if (!prices.emplace(name, price).second)
            throw std::runtime_error(path + ": duplicate price for '" + name + "'");
    }

    PriceJoin join;
    std::set<std::string> used;
    for (const Ingredient& ing : ingredients) {
        const auto it = prices.find(ing.name);
        if (it == prices.end()) {
            join.report.unpriced_ingredients.push_back(ing.name);
            continue;
        }
        Ingredient priced = ing;
        priced.price_per_gram = it->second;
        join.priced.push_back(std::move(priced));
        used.insert(ing.name);
    }
    for (const auto& [name, price] : prices)
        if (!used.count(name)) join.report.unmatched_prices.push_back(name);
    return join;
}

/// Reads the bounds table (columns: nutrient, min_value, max_value). A blank
/// cell omits that side. Key/column consistency is checked later, when the
/// catalog is assembled.
inline std::vector<NutrientBound> load_bounds(const std::string& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw std::runtime_error(path + ": empty bounds file");
    const auto& header = rows[0];
    int key_col = -1, min_col = -1, max_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string key = normalize_name(header[c]);
        if (key == "nutrient") key_col = static_cast<int>(c);
        else if (key == "min_value") min_col = static_cast<int>(c);
        else if (key == "max_value") max_col = static_cast<int>(c);
    }
    if (key_col < 0 || min_col < 0 || max_col < 0)
        throw std::runtime_error(path + ": header must contain nutrient, min_value, max_value");

    std::vector<NutrientBound> bounds;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = path + ": row " + std::to_string(r);
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw std::runtime_error(where + ": expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(row.size()));
        NutrientBound b;
        b.key = normalize_name(row[static_cast<std::size_t>(key_col)]);
        b.unit = unit_of_key(b.key);
        const std::string& min_cell = row[static_cast<std::size_t>(min_col)];
        const std::string& max_cell = row[static_cast<std::size_t>(max_col)];
        if (!csv::is_blank(min_cell)) b.min_value = csv::parse_double(min_cell, where + ", min_value");
        if (!csv::is_blank(max_cell)) b.max_value = csv::parse_double(max_cell, where + ", max_value");
        if (!b.min_value && !b.max_value)
            throw std::runtime_error(where + " ('" + b.key + "'): at least one of min_value/max_value required");
        if (b.min_value && *b.min_value < 0.0)
            throw std::runtime_error(where + " ('" + b.key + "'): min_value must be >= 0");
        if (b.min_value && b.max_value && *b.min_value > *b.max_value)
            throw std::runtime_error(where + " ('" + b.key + "'): min_value exceeds max_value");
        bounds.push_back(std::move(b));
    }
    return bounds;
}

/// Assembles and validates the catalog: every bound key must be a nutrition
/// column and every ingredient must carry a price.
inline Catalog make_catalog(std::vector<Ingredient> ingredients, std::vector<NutrientBound> bounds,
                            std::vector<std::string> nutrient_keys) {
    for (const NutrientBound& b : bounds)
        if (std::find(nutrient_keys.begin(), nutrient_keys.end(), b.key) == nutrient_keys.end())
            throw std::runtime_error("bounds: unknown nutrient key '" + b.key + "'");
    std::set<std::string> names;
    for (const Ingredient& ing : ingredients) {
        if (!ing.price_per_gram)
            throw std::runtime_error("catalog: ingredient '" + ing.name + "' has no price");
        if (!names.insert(ing.name).second)
            throw std::runtime_error("catalog: duplicate ingredient name '" + ing.name + "'");
    }
    Catalog cat;
    cat.ingredients = std::move(ingredients);
    cat.bounds = std::move(bounds);
    cat.nutrient_keys = std::move(nutrient_keys);
    return cat;
}

struct LoadedCatalog {
    Catalog catalog;
    LoadReport load_report;
    JoinReport join_report;
};

inline LoadedCatalog load_catalog(const std::string& nutrition_path, const std::string& prices_path,
                                  const std::string& bounds_path) {
    NutritionData nutrition = load_nutrition(nutrition_path);
    PriceJoin join = load_prices(prices_path, nutrition.ingredients);
    std::vector<NutrientBound> bounds = load_bounds(bounds_path);
    LoadedCatalog out;
    out.catalog = make_catalog(std::move(join.priced), std::move(bounds), std::move(nutrition.nutrient_keys));
    out.load_report = std::move(nutrition.report);
    out.join_report = std::move(join.report);
    return out;
}

inline void write_nutrition(const std::string& path, const Catalog& catalog) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"name", "serving_size (g)"};
    header.insert(header.end(), catalog.nutrient_keys.begin(), catalog.nutrient_keys.end());
    rows.push_back(header);
    for (const Ingredient& ing : catalog.ingredients) {
        std::vector<std::string> row = {ing.name, csv::format_double(ing.serving_size)};
        for (const std::string& key : catalog.nutrient_keys) {
            const auto it = ing.nutrients.find(key);
            row.push_back(csv::format_double(it == ing.nutrients.end() ? 0.0 : it->second));
        }
        rows.push_back(std::move(row));
    }
    csv::write_file(path, rows);
}

inline void write_prices(const std::string& path, const Catalog& catalog) {
    std::vector<std::vector<std::string>> rows = {{"name", "price_per_unit"}};
    for (const Ingredient& ing : catalog.ingredients)
        rows.push_back({ing.name, csv::format_double(ing.price_per_gram.value())});
    csv::write_file(path, rows);
}

inline void write_bounds(const std::string& path, const std::vector<NutrientBound>& bounds) {
    std::vector<std::vector<std::string>> rows = {{"nutrient", "min_value", "max_value"}};
    for (const NutrientBound& b : bounds)
        rows.push_back({b.key, b.min_value ? csv::format_double(*b.min_value) : "",
                        b.max_value ? csv::format_double(*b.max_value) : ""});
    csv::write_file(path, rows);
}

}  // namespace mealsolve
