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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mealsolve/oracle.hpp"
#include "mealsolve/report.hpp"
#include "mealsolve/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnbounded = 3;

struct DataFlags {
    std::string nutrition, prices, bounds;
};

struct SpecFlags {
    std::string scenario = "optimal";
    std::optional<double> diversity_fraction;
    std::vector<std::string> overrides;
    bool diversity_priced_only = false;
};

void add_data_flags(CLI::App* cmd, DataFlags& data) {
    cmd->add_option("--nutrition", data.nutrition, "nutrition facts CSV")->required();
    cmd->add_option("--prices", data.prices, "prices CSV (name,price_per_unit)")->required();
    cmd->add_option("--bounds", data.bounds, "nutrient bounds CSV")->required();
}

void add_spec_flags(CLI::App* cmd, SpecFlags& flags) {
    cmd->add_option("--scenario", flags.scenario, "scenario preset id")->default_val("optimal");
    cmd->add_option("--diversity-fraction", flags.diversity_fraction,
                    "max share of total weight per ingredient, in (0,1]");
    cmd->add_option("--override", flags.overrides,
                    "bound override \"nutrient=min:max\" (either side may be blank)");
    cmd->add_flag("--diversity-priced-only", flags.diversity_priced_only,
                  "emit diversity rows only for ingredients with price > 0");
}

// "nutrient=min:max" with either side optional
std::pair<std::string, mealsolve::BoundOverride> parse_override(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::runtime_error("override '" + text + "' must look like nutrient=min:max");
    const std::string key = mealsolve::normalize_name(text.substr(0, eq));
    const std::string rest = text.substr(eq + 1);
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos)
        throw std::runtime_error("override '" + text + "' must look like nutrient=min:max");
    mealsolve::BoundOverride ov;
    const std::string lo = rest.substr(0, colon);
    const std::string hi = rest.substr(colon + 1);
    if (!mealsolve::csv::is_blank(lo)) ov.min_value = mealsolve::csv::parse_double(lo, "override min");
    if (!mealsolve::csv::is_blank(hi)) ov.max_value = mealsolve::csv::parse_double(hi, "override max");
    if (!ov.min_value && !ov.max_value)
        throw std::runtime_error("override '" + text + "' sets neither side");
    return {key, ov};
}

mealsolve::ScenarioPreset preset_with_flags(const SpecFlags& flags) {
    mealsolve::ScenarioPreset pre = mealsolve::preset(flags.scenario);
    if (flags.diversity_fraction) pre.spec.diversity_fraction = *flags.diversity_fraction;
    pre.spec.diversity_positive_price_only = flags.diversity_priced_only;
    for (const std::string& text : flags.overrides) {
        auto [key, ov] = parse_override(text);
        pre.spec.bound_overrides[key] = ov;
    }
    return pre;
}

mealsolve::LoadedCatalog load_with_diagnostics(const DataFlags& data) {
    mealsolve::LoadedCatalog loaded = mealsolve::load_catalog(data.nutrition, data.prices, data.bounds);
    const std::string imputed = loaded.load_report.summary();
    if (!imputed.empty()) std::cerr << "load report:\n" << imputed;
    if (!loaded.join_report.unpriced_ingredients.empty()) {
        std::cerr << "excluded (no price): " << loaded.join_report.unpriced_ingredients.size()
                  << " ingredient(s)\n";
        for (const std::string& name : loaded.join_report.unpriced_ingredients)
            std::cerr << "  " << name << "\n";
    }
    if (!loaded.join_report.unmatched_prices.empty()) {
        std::cerr << "prices without a nutrition row: " << loaded.join_report.unmatched_prices.size()
                  << "\n";
        for (const std::string& name : loaded.join_report.unmatched_prices)
            std::cerr << "  " << name << "\n";
    }
    return loaded;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

// Ranks original rows by violation at the returned (phase-1) point so the
// user sees which bounds could not be met.
void print_most_violated(const mealsolve::LpProblem& lp, const mealsolve::Solution& sol) {
    struct Entry {
        double violation;
        std::string name;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const mealsolve::Constraint& c = lp.constraints[i];
        double act = 0.0, maxabs = 0.0;
        for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
            act += c.coeffs[j] * sol.weights[j];
            maxabs = std::max(maxabs, std::fabs(c.coeffs[j]));
        }
        double viol = 0.0;
        if (c.sense == mealsolve::Sense::LessEqual) viol = act - c.rhs;
        else if (c.sense == mealsolve::Sense::GreaterEqual) viol = c.rhs - act;
        else viol = std::fabs(act - c.rhs);
        if (maxabs > 0.0) viol /= maxabs;
        if (viol <= 1e-9) continue;
        std::string name = i < lp.constraint_names.size() && !lp.constraint_names[i].empty()
                               ? lp.constraint_names[i]
                               : "constraint " + std::to_string(i);
        entries.push_back({viol, std::move(name)});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.violation > b.violation; });
    const std::size_t shown = std::min<std::size_t>(entries.size(), 5);
    for (std::size_t i = 0; i < shown; ++i)
        std::cerr << "  " << entries[i].name << " (scaled violation "
                  << mealsolve::csv::format_double(entries[i].violation) << ")\n";
}

int run_solve(const DataFlags& data, const SpecFlags& flags, const std::string& format,
              const std::string& out_path, bool no_timestamp, bool swap_priorities) {
    const mealsolve::LoadedCatalog loaded = load_with_diagnostics(data);
    const mealsolve::ScenarioPreset pre = preset_with_flags(flags);

    mealsolve::RunOptions options;
    options.swap_priorities = swap_priorities;
    const mealsolve::ScenarioRun run = mealsolve::run_scenario(loaded.catalog, pre, options);
    for (const std::string& note : run.solution.notes) std::cerr << "note: " << note << "\n";

    if (run.solution.status == mealsolve::SolveStatus::Infeasible) {
        std::cerr << "infeasible: phase-1 residual " << run.solution.phase1_residual << "\n";
        std::cerr << "most violated bounds:\n";
        print_most_violated(run.problem, run.solution);
        return kExitInfeasible;
    }
    if (run.solution.status == mealsolve::SolveStatus::Unbounded) {
        std::cerr << "unbounded: the objective can decrease without limit along a feasible ray\n";
        return kExitUnbounded;
    }

    const mealsolve::RunRecord record = mealsolve::make_run_record(pre.id, run, !no_timestamp);
    if (format == "json") write_output(out_path, mealsolve::to_json(record).dump(2) + "\n");
    else if (format == "csv") write_output(out_path, mealsolve::render_plan_csv(record));
    else write_output(out_path, mealsolve::render_table(record));
    return kExitOk;
}

int run_compare(const DataFlags& data, const SpecFlags& flags, const std::string& scenarios_arg,
                const std::string& format, const std::string& out_path, bool no_timestamp) {
    const mealsolve::LoadedCatalog loaded = load_with_diagnostics(data);

    std::vector<std::string> ids;
    if (scenarios_arg == "all") {
        ids = mealsolve::scenario_ids();
    } else {
        std::string token;
        for (char c : scenarios_arg + ",") {
            if (c == ',') {
                if (!token.empty()) ids.push_back(token);
                token.clear();
            } else {
                token += c;
            }
        }
    }
    if (ids.empty()) throw std::runtime_error("no scenarios requested");
    for (const std::string& id : ids) mealsolve::preset(id);  // vocabulary check up front

    (void)flags;
    const mealsolve::ComparisonReport report =
        mealsolve::compare_scenarios(loaded.catalog, ids, mealsolve::RunOptions{}, !no_timestamp);
    if (format == "table") write_output(out_path, mealsolve::render_comparison_table(report));
    else write_output(out_path, mealsolve::render_comparison_csv(report));
    return kExitOk;
}

int run_validate(const DataFlags& data, const SpecFlags& flags, bool scenario_flag_given,
                 const std::string& plan_path) {
    const mealsolve::LoadedCatalog loaded = load_with_diagnostics(data);

    std::ifstream in(plan_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + plan_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(plan_path + ": malformed plan JSON: " + e.what());
    }
    mealsolve::RunRecord record;
    try {
        record = mealsolve::run_record_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(plan_path + ": malformed plan JSON: " + e.what());
    }

    SpecFlags effective = flags;
    if (!scenario_flag_given) effective.scenario = record.scenario;
    const mealsolve::ScenarioPreset pre = preset_with_flags(effective);

    mealsolve::DietPlan plan;
    plan.entries = record.entries;
    const mealsolve::ViolationReport report = mealsolve::check_plan(loaded.catalog, pre.spec, plan);
    if (report.feasible()) {
        std::cout << "plan satisfies every constraint of scenario '" << pre.id << "'\n";
        return kExitOk;
    }
    std::cout << report.to_string();
    return kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diet-plan optimizer: builds and solves least-cost meal programs"};
    app.require_subcommand(1);

    DataFlags data;
    SpecFlags flags;
    std::string format = "table";
    std::string compare_format = "csv";
    std::string out_path;
    std::string scenarios_arg = "all";
    std::string plan_path;
    bool no_timestamp = false;
    bool swap_priorities = false;

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one scenario and print the plan");
    add_data_flags(solve_cmd, data);
    add_spec_flags(solve_cmd, flags);
    solve_cmd->add_option("--format", format, "table | json | csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    solve_cmd->add_option("--out", out_path, "write results to a file instead of stdout");
    solve_cmd->add_flag("--no-timestamp", no_timestamp,
                        "omit wall-clock fields for reproducible output");
    solve_cmd->add_flag("--swap-priorities", swap_priorities,
                        "gods_diet only: make price the primary objective");

    CLI::App* compare_cmd = app.add_subcommand("compare", "run several scenarios and tabulate them");
    add_data_flags(compare_cmd, data);
    compare_cmd->add_option("--scenarios", scenarios_arg, "all or comma-separated ids")
        ->default_val("all");
    compare_cmd->add_option("--format", format, "csv | table")
        ->check(CLI::IsMember({"csv", "table"}));
    compare_cmd->add_option("--out", out_path, "write results to a file instead of stdout");
    compare_cmd->add_flag("--no-timestamp", no_timestamp,
                          "omit wall-clock fields for reproducible output");

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "re-check a saved plan JSON against the raw tables");
    add_data_flags(validate_cmd, data);
    add_spec_flags(validate_cmd, flags);
    validate_cmd->add_option("--plan", plan_path, "plan JSON produced by solve")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(data, flags, format, out_path, no_timestamp, swap_priorities);
        if (compare_cmd->parsed()) {
            if (format == "table") return run_compare(data, flags, scenarios_arg, format, out_path,
                                                      no_timestamp);
            return run_compare(data, flags, scenarios_arg, "csv", out_path, no_timestamp);
        }
        if (validate_cmd->parsed())
            return run_validate(data, flags, validate_cmd->count("--scenario") > 0, plan_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
