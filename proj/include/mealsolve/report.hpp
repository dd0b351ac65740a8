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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <future>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mealsolve/csv.hpp"
#include "mealsolve/diet_model.hpp"
#include "mealsolve/ingest.hpp"
#include "mealsolve/scenarios.hpp"

namespace mealsolve {

/// One solved run, in the shape of the plan JSON schema:
///   { scenario, status, total_cost, total_weight_g, iterations,
///     solve_time_s, entries: [{id, name, weight_g}], nutrient_totals,
///     timestamp? }
/// The timestamp is optional; suppressing it (and zeroing solve_time_s) makes
/// repeated runs byte-identical.
struct RunRecord {
    std::string scenario;
    std::string status;
    double total_cost = 0.0;
    double total_weight_g = 0.0;
    long iterations = 0;
    double solve_time_s = 0.0;
    std::vector<PlanEntry> entries;
    std::map<std::string, double> nutrient_totals;
    std::string timestamp;  // ISO 8601 UTC, empty when suppressed

    bool operator==(const RunRecord&) const = default;
};

inline std::string iso8601_utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline RunRecord make_run_record(const std::string& scenario, const ScenarioRun& run,
                                 bool with_timestamp = true) {
    RunRecord rec;
    rec.scenario = scenario;
    rec.status = to_string(run.solution.status);
    rec.iterations = run.solution.iterations;
    rec.solve_time_s = with_timestamp ? run.solution.solve_time : 0.0;
    if (run.solution.status == SolveStatus::Optimal) {
        rec.total_cost = run.plan.total_cost;
        rec.total_weight_g = run.plan.total_weight;
        rec.entries = run.plan.entries;
        rec.nutrient_totals = run.plan.nutrient_totals;
    }
    if (with_timestamp) rec.timestamp = iso8601_utc_now();
    return rec;
}

inline nlohmann::json to_json(const RunRecord& rec) {
    nlohmann::json entries = nlohmann::json::array();
    for (const PlanEntry& e : rec.entries)
        entries.push_back({{"id", e.id}, {"name", e.name}, {"weight_g", e.weight_g}});
    nlohmann::json j = {
        {"scenario", rec.scenario},
        {"status", rec.status},
        {"total_cost", rec.total_cost},
        {"total_weight_g", rec.total_weight_g},
        {"iterations", rec.iterations},
        {"solve_time_s", rec.solve_time_s},
        {"entries", entries},
        {"nutrient_totals", rec.nutrient_totals},
    };
    if (!rec.timestamp.empty()) j["timestamp"] = rec.timestamp;
    return j;
}

inline RunRecord run_record_from_json(const nlohmann::json& j) {
    RunRecord rec;
    rec.scenario = j.at("scenario").get<std::string>();
    rec.status = j.at("status").get<std::string>();
    rec.total_cost = j.at("total_cost").get<double>();
    rec.total_weight_g = j.at("total_weight_g").get<double>();
    rec.iterations = j.at("iterations").get<long>();
    rec.solve_time_s = j.at("solve_time_s").get<double>();
    for (const auto& e : j.at("entries"))
        rec.entries.push_back({e.at("id").get<int>(), e.at("name").get<std::string>(),
                               e.at("weight_g").get<double>()});
    if (j.contains("nutrient_totals"))
        for (const auto& [key, value] : j.at("nutrient_totals").items())
            rec.nutrient_totals[key] = value.get<double>();
    if (j.contains("timestamp")) rec.timestamp = j.at("timestamp").get<std::string>();
    return rec;
}

inline std::string format_fixed(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

/// Plan table in the style of the result listings: one row per selected
/// ingredient, totals underneath at six decimals.
inline std::string render_table(const RunRecord& rec) {
    std::size_t name_width = 10;
    for (const PlanEntry& e : rec.entries) name_width = std::max(name_width, e.name.size());
    std::string out;
    out += "scenario: " + rec.scenario + " (" + rec.status + ")\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%6s  %-*s  %14s\n", "id", static_cast<int>(name_width),
                  "Ingredient", "Weight (g)");
    out += line;
    for (const PlanEntry& e : rec.entries) {
        std::snprintf(line, sizeof(line), "%6d  %-*s  %14s\n", e.id, static_cast<int>(name_width),
                      e.name.c_str(), format_fixed(e.weight_g).c_str());
        out += line;
    }
    out += "Total cost of the diet: " + format_fixed(rec.total_cost) + "\n";
    out += "Total weight of the diet: " + format_fixed(rec.total_weight_g) + " grams\n";
    return out;
}

inline std::string render_plan_csv(const RunRecord& rec) {
    std::string out = "id,name,weight_g\n";
    for (const PlanEntry& e : rec.entries)
        out += csv::join_record({std::to_string(e.id), e.name, csv::format_double(e.weight_g)});
    return out;
}

struct ComparisonReport {
    std::vector<RunRecord> rows;  // ordered by requested scenario id
    double mean_cost = 0.0;       // across optimal rows; informational
};

/// Runs each scenario concurrently (inputs are immutable, solves share no
/// state) and assembles rows in the requested order. A failed scenario is a
/// row with its status, not an error.
inline ComparisonReport compare_scenarios(const Catalog& catalog, const std::vector<std::string>& ids,
                                          const RunOptions& options = {}, bool with_timestamp = true) {
    std::vector<std::future<RunRecord>> futures;
    futures.reserve(ids.size());
    for (const std::string& id : ids) {
        futures.push_back(std::async(std::launch::async, [&, id] {
            const ScenarioRun run = run_scenario(catalog, preset(id), options);
            return make_run_record(id, run, with_timestamp);
        }));
    }
    ComparisonReport report;
    double total = 0.0;
    std::size_t optimal = 0;
    for (auto& f : futures) {
        report.rows.push_back(f.get());
        if (report.rows.back().status == "optimal") {
            total += report.rows.back().total_cost;
            ++optimal;
        }
    }
    report.mean_cost = optimal ? total / static_cast<double>(optimal) : 0.0;
    return report;
}

/// Tidy (scenario, metric, value) CSV, one row per metric, ready for any
/// plotting tool. The final row carries the informational mean cost.
inline std::string render_comparison_csv(const ComparisonReport& report) {
    std::string out = "scenario,metric,value\n";
    for (const RunRecord& rec : report.rows) {
        out += csv::join_record({rec.scenario, "status", rec.status});
        if (rec.status == "optimal") {
            out += csv::join_record({rec.scenario, "total_cost", csv::format_double(rec.total_cost)});
            out += csv::join_record(
                {rec.scenario, "total_weight_g", csv::format_double(rec.total_weight_g)});
        }
        out += csv::join_record({rec.scenario, "iterations", std::to_string(rec.iterations)});
        out += csv::join_record({rec.scenario, "solve_time_s", csv::format_double(rec.solve_time_s)});
    }
    out += csv::join_record({"all", "mean_total_cost", csv::format_double(report.mean_cost)});
    return out;
}

inline std::string render_comparison_table(const ComparisonReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %-11s %14s %14s %10s %12s\n", "scenario", "status",
                  "cost", "weight (g)", "iters", "time (s)");
    out += line;
    for (const RunRecord& rec : report.rows) {
        if (rec.status == "optimal")
            std::snprintf(line, sizeof(line), "%-16s %-11s %14s %14s %10ld %12.6f\n",
                          rec.scenario.c_str(), rec.status.c_str(),
                          format_fixed(rec.total_cost).c_str(),
                          format_fixed(rec.total_weight_g).c_str(), rec.iterations,
                          rec.solve_time_s);
        else
            std::snprintf(line, sizeof(line), "%-16s %-11s %14s %14s %10ld %12.6f\n",
                          rec.scenario.c_str(), rec.status.c_str(), "-", "-", rec.iterations,
                          rec.solve_time_s);
        out += line;
    }
    out += "mean cost across optimal scenarios: " + format_fixed(report.mean_cost) + "\n";
    return out;
}

}  // namespace mealsolve
