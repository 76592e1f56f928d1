// Command-line harness: single solves, budget sweeps, baseline comparisons,
// credit-data ingestion, CSV/JSON reporting.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "auditgame/baselines.hpp"
#include "auditgame/common.hpp"
#include "auditgame/credit.hpp"
#include "auditgame/game.hpp"
#include "auditgame/parallel.hpp"
#include "auditgame/report.hpp"
#include "auditgame/scenario.hpp"
#include "auditgame/threshold_search.hpp"

using namespace auditgame;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNonConverged = 2;

struct CommonOptions {
    std::string scenario_path;
    std::string mode = "exact";
    int samples = 2000;
    std::uint64_t seed = 42;
    std::string inner = "full";
    double epsilon = 0.1;
    int repeats = -1;  // -1 = per-baseline default
    bool count_infeasible = true;
    bool per_draw_average = false;
};

EvalMode make_mode(const CommonOptions& opt) {
    if (opt.mode == "exact") return EvalMode::exact();
    if (opt.mode == "mc") return EvalMode::monte_carlo(opt.samples, opt.seed);
    throw ValidationError("--mode must be 'exact' or 'mc'");
}

InnerSolver make_inner(const CommonOptions& opt) {
    if (opt.inner == "full") return InnerSolver::Full;
    if (opt.inner == "cggs") return InnerSolver::Cggs;
    throw ValidationError("--inner must be 'full' or 'cggs'");
}

struct MethodResult {
    GameSolution solution;
    std::optional<long long> explored;
    bool non_converged = false;
};

MethodResult run_method(const std::string& method, const Scenario& scenario,
                        const JointCountModel& model, const CommonOptions& opt) {
    const EvalMode mode = make_mode(opt);
    MethodResult result;
    if (method == "brute-force") {
        BruteForceResult bf = brute_force_thresholds(scenario, model, mode);
        result.solution = std::move(bf.solution);
        result.explored = bf.vectors_solved;
    } else if (method == "ishm" || method == "ishm+cggs") {
        IshmOptions ishm_opt;
        ishm_opt.epsilon = opt.epsilon;
        ishm_opt.inner = method == "ishm" ? make_inner(opt) : InnerSolver::Cggs;
        ishm_opt.count_infeasible = opt.count_infeasible;
        auto [sol, trace] = ishm(scenario, model, ishm_opt, mode);
        result.solution = std::move(sol);
        result.explored = trace.explored_count;
    } else if (method == "baseline:random-orders") {
        IshmOptions ishm_opt;
        ishm_opt.epsilon = opt.epsilon;
        ishm_opt.inner = make_inner(opt);
        auto [ishm_sol, trace] = ishm(scenario, model, ishm_opt, mode);
        const int repeats = opt.repeats > 0 ? opt.repeats : kDefaultRandomOrderRepeats;
        bool clamped = false;
        result.solution =
            baseline_random_orders(scenario, model, ishm_sol.policy.thresholds, repeats, opt.seed,
                                   mode, opt.per_draw_average, &clamped);
        if (clamped)
            std::cerr << "warning: repeats exceed the number of permitted orderings; "
                         "sampling all of them\n";
    } else if (method == "baseline:random-thresholds") {
        const int repeats = opt.repeats > 0 ? opt.repeats : kDefaultRandomThresholdRepeats;
        result.solution = baseline_random_thresholds(scenario, model, repeats, opt.seed,
                                                     make_inner(opt), mode);
    } else if (method == "baseline:benefit") {
        result.solution = baseline_benefit_greedy(scenario, model, mode);
    } else {
        throw ValidationError("unknown method '" + method + "'");
    }
    result.non_converged = !result.solution.diagnostics.converged;
    return result;
}

json solution_to_json(const Scenario& scenario, const GameSolution& sol) {
    json j;
    j["objective"] = sol.objective;
    j["thresholds"] = sol.policy.thresholds;
    j["mixture"] = json::array();
    for (const auto& [ordering, prob] : sol.policy.mixture) {
        json types = json::array();
        for (int t : ordering) types.push_back(scenario.alert_types[t].id);
        j["mixture"].push_back({{"ordering", types}, {"probability", prob}});
    }
    j["attacker_values"] = json::object();
    for (int e = 0; e < scenario.num_attackers(); ++e)
        j["attacker_values"][scenario.attackers[e].id] = sol.attacker_values[e];
    j["best_responses"] = json::object();
    for (int e = 0; e < scenario.num_attackers(); ++e)
        j["best_responses"][scenario.attackers[e].id] =
            scenario.victims[sol.best_responses[e]].id;
    json diag;
    diag["columns_generated"] = sol.diagnostics.columns_generated;
    diag["lp_iterations"] = sol.diagnostics.lp_iterations;
    diag["pricing_rounds"] = sol.diagnostics.pricing_rounds;
    diag["converged"] = sol.diagnostics.converged;
    if (sol.diagnostics.best_draw_objective)
        diag["best_draw_objective"] = *sol.diagnostics.best_draw_objective;
    j["diagnostics"] = diag;
    return j;
}

int effective_support(const GameSolution& sol) {
    int n = 0;
    for (const auto& [o, p] : sol.policy.mixture) n += p > 1e-6 ? 1 : 0;
    return n;
}

std::string thresholds_summary(const ThresholdVector& b) {
    std::string s = "[";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += ",";
        s += format_number(b[i]);
    }
    return s + "]";
}

int cmd_solve(const CommonOptions& opt, const std::string& method, std::optional<double> budget,
              const std::string& output) {
    Scenario scenario = load_scenario(opt.scenario_path);
    if (budget) scenario.total_budget = *budget;
    const JointCountModel model = scenario.count_model();
    const MethodResult result = run_method(method, scenario, model, opt);

    std::printf("scenario:   %s\n", scenario.name.empty() ? opt.scenario_path.c_str()
                                                          : scenario.name.c_str());
    std::printf("budget:     %s\n", format_number(scenario.total_budget).c_str());
    std::printf("method:     %s\n", method.c_str());
    if (method == "ishm" || method == "ishm+cggs")
        std::printf("epsilon:    %s\n", format_number(opt.epsilon).c_str());
    std::printf("objective:  %s\n", format_number(result.solution.objective).c_str());
    std::printf("thresholds: %s\n", thresholds_summary(result.solution.policy.thresholds).c_str());
    std::printf("support:    %d ordering(s)\n", effective_support(result.solution));
    if (result.explored) std::printf("explored:   %lld\n", *result.explored);
    if (result.solution.diagnostics.best_draw_objective)
        std::printf("best draw:  %s\n",
                    format_number(*result.solution.diagnostics.best_draw_objective).c_str());

    json j = solution_to_json(scenario, result.solution);
    j["scenario"] = scenario.name;
    j["budget"] = scenario.total_budget;
    j["method"] = method;
    if (method == "ishm" || method == "ishm+cggs") j["epsilon"] = opt.epsilon;
    if (result.explored) j["explored"] = *result.explored;
    const std::string text = j.dump(2) + "\n";
    if (output.empty()) {
        std::printf("solution:\n%s", text.c_str());
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw ParseError("cannot write output file '" + output + "'");
        out << text;
        std::printf("solution written to %s\n", output.c_str());
    }
    if (result.non_converged) {
        std::fprintf(stderr, "error: solver did not converge within its round cap\n");
        return kExitNonConverged;
    }
    return kExitOk;
}

int cmd_sweep(const CommonOptions& opt, const std::vector<double>& budgets,
              const std::vector<std::string>& methods, const std::vector<double>& epsilons,
              const std::string& output, bool timings, unsigned threads) {
    const Scenario base = load_scenario(opt.scenario_path);
    struct Cell {
        double budget;
        std::string method;
        std::optional<double> epsilon;
    };
    std::vector<Cell> cells;
    for (double b : budgets) {
        for (const auto& m : methods) {
            if (m == "ishm" || m == "ishm+cggs") {
                for (double e : epsilons.empty() ? std::vector<double>{opt.epsilon} : epsilons)
                    cells.push_back({b, m, e});
            } else {
                cells.push_back({b, m, std::nullopt});
            }
        }
    }

    ExperimentReport report;
    report.rows.resize(cells.size());
    bool any_failed = false;
    parallel_for(
        cells.size(),
        [&](std::size_t i) {
            const Cell& cell = cells[i];
            ReportRow& row = report.rows[i];
            row.scenario_id = base.name.empty() ? opt.scenario_path : base.name;
            row.budget = cell.budget;
            row.method = cell.method;
            row.epsilon = cell.epsilon;
            Scenario scenario = base;
            scenario.total_budget = cell.budget;
            CommonOptions cell_opt = opt;
            if (cell.epsilon) cell_opt.epsilon = *cell.epsilon;
            const auto start = std::chrono::steady_clock::now();
            try {
                const JointCountModel model = scenario.count_model();
                MethodResult result = run_method(cell.method, scenario, model, cell_opt);
                row.objective = result.solution.objective;
                row.thresholds = result.solution.policy.thresholds;
                row.mixture_support = effective_support(result.solution);
                row.explored_count = result.explored;
                if (result.non_converged) {
                    row.status = "error";
                    row.message = "solver did not converge";
                    any_failed = true;
                }
            } catch (const std::exception& e) {
                row.status = "error";
                row.message = e.what();
                any_failed = true;
            }
            if (timings)
                row.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
        },
        threads);

    // Budget-averaged precision per (method, epsilon) against brute force.
    std::vector<double> optimum;
    bool have_optimum = true;
    for (double b : budgets) {
        bool found = false;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].method == "brute-force" && cells[i].budget == b &&
                report.rows[i].status == "ok" && report.rows[i].objective) {
                optimum.push_back(*report.rows[i].objective);
                found = true;
                break;
            }
        }
        if (!found) {
            have_optimum = false;
            break;
        }
    }
    if (have_optimum) {
        std::vector<std::pair<std::string, std::optional<double>>> groups;
        for (const auto& cell : cells) {
            if (cell.method == "brute-force") continue;
            const auto key = std::make_pair(cell.method, cell.epsilon);
            if (std::find(groups.begin(), groups.end(), key) == groups.end())
                groups.push_back(key);
        }
        for (const auto& [m, e] : groups) {
            std::vector<double> values;
            std::vector<std::size_t> row_indices;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].method == m && cells[i].epsilon == e && report.rows[i].objective) {
                    values.push_back(*report.rows[i].objective);
                    row_indices.push_back(i);
                }
            }
            if (values.size() != budgets.size()) continue;
            try {
                const double gamma = precision_gamma(values, optimum);
                for (std::size_t i : row_indices) report.rows[i].gamma_vs_bruteforce = gamma;
            } catch (const ValidationError&) {
                // a zero optimum leaves the gamma column empty
            }
        }
    }

    for (const auto& row : report.rows) {
        std::printf("B=%-6s %-26s %s obj=%-10s thr=%s%s\n", format_number(row.budget).c_str(),
                    (row.method + (row.epsilon ? "(eps=" + format_number(*row.epsilon) + ")" : ""))
                        .c_str(),
                    row.status.c_str(),
                    row.objective ? format_number(*row.objective).c_str() : "-",
                    row.thresholds.empty() ? "-" : thresholds_summary(row.thresholds).c_str(),
                    row.gamma_vs_bruteforce
                        ? (" gamma=" + format_number(*row.gamma_vs_bruteforce)).c_str()
                        : "");
    }
    if (output.empty()) {
        std::printf("%s", report.to_csv().c_str());
    } else {
        report.write_csv(output);
        std::printf("report written to %s\n", output.c_str());
    }
    return any_failed ? kExitNonConverged : kExitOk;
}

int cmd_ingest_credit(const std::string& input, const std::string& output, int applicants,
                      std::uint64_t seed, bool empirical) {
    const std::vector<CreditRecord> records = parse_german_data(input);
    std::printf("parsed %zu records\n", records.size());
    std::vector<int> histogram(6, 0);
    for (const auto& rec : records) {
        const auto label = label_alert_type(rec);
        ++histogram[label ? *label : 0];
    }
    std::printf("label histogram: none=%d", histogram[0]);
    for (int t = 1; t <= 5; ++t) std::printf(" type%d=%d", t, histogram[t]);
    std::printf("\n");
    CreditScenarioOptions options;
    options.applicants = applicants;
    options.seed = seed;
    options.empirical = empirical;
    const Scenario scenario = build_rea_b_scenario(records, options);
    save_scenario(scenario, output);
    std::printf("scenario written to %s (%d attackers, %d victims, %d alert types)\n",
                output.c_str(), scenario.num_attackers(), scenario.num_victims(),
                scenario.num_types());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Game-theoretic audit prioritization solver"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string method = "brute-force";
    std::optional<double> budget;
    std::string output;
    std::vector<double> budgets;
    std::vector<std::string> methods;
    std::vector<double> epsilons;
    bool timings = false;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario)
            cmd->add_option("--scenario", opt.scenario_path, "scenario JSON file")->required();
        cmd->add_option("--mode", opt.mode, "detection evaluation: exact|mc")
            ->check(CLI::IsMember({"exact", "mc"}));
        cmd->add_option("--samples", opt.samples, "monte carlo sample count");
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_option("--inner", opt.inner, "ordering-game solver: full|cggs")
            ->check(CLI::IsMember({"full", "cggs"}));
        cmd->add_option("--epsilon", opt.epsilon, "shrink step size in (0,1)");
        cmd->add_option("--repeats", opt.repeats, "repeats for randomized baselines");
        cmd->add_option("--count-infeasible", opt.count_infeasible,
                        "count infeasible candidates as explored");
        cmd->add_flag("--per-draw-average", opt.per_draw_average,
                      "random-orders baseline: average pure-policy values instead of "
                      "evaluating one mixture");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one instance at one budget");
    add_common(solve, true);
    solve->add_option("--budget", budget, "override the scenario budget");
    solve->add_option("--method", method,
                      "brute-force|ishm|ishm+cggs|baseline:random-orders|"
                      "baseline:random-thresholds|baseline:benefit")
        ->required();
    solve->add_option("--output", output, "write the solution JSON here instead of stdout");

    CLI::App* sweep = app.add_subcommand("sweep", "cross-product experiment runs");
    add_common(sweep, true);
    sweep->add_option("--budgets", budgets, "budget list")->required()->delimiter(',');
    sweep->add_option("--methods", methods, "method list")->required()->delimiter(',');
    sweep->add_option("--epsilons", epsilons, "epsilon list for ishm methods")->delimiter(',');
    sweep->add_option("--output", output, "CSV output path (stdout when omitted)");
    sweep->add_flag("--timings", timings, "fill the wall_ms column (breaks byte-identical reruns)");
    sweep->add_option("--threads", threads, "worker threads (0 = hardware)");

    CLI::App* ingest = app.add_subcommand("ingest-credit", "build a scenario from credit data");
    std::string input;
    int applicants = 100;
    bool empirical = false;
    ingest->add_option("--input", input, "german.data-layout file")->required();
    ingest->add_option("--output", output, "scenario JSON output path")->required();
    ingest->add_option("--applicants", applicants, "number of sampled applicants");
    ingest->add_option("--seed", opt.seed, "RNG seed");
    ingest->add_flag("--empirical", empirical,
                     "bootstrap count models from the records instead of the fixed parameters");

    CLI::App* builtin = app.add_subcommand("export-builtin", "write a bundled scenario to a file");
    std::string builtin_name = "syn_a";
    builtin->add_option("--name", builtin_name, "builtin scenario name")
        ->check(CLI::IsMember({"syn_a"}));
    builtin->add_option("--output", output, "scenario JSON output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opt, method, budget, output);
        if (sweep->parsed())
            return cmd_sweep(opt, budgets, methods, epsilons, output, timings, threads);
        if (ingest->parsed())
            return cmd_ingest_credit(input, output, applicants, opt.seed, empirical);
        if (builtin->parsed()) {
            save_scenario(build_syn_a(), output);
            std::printf("scenario written to %s\n", output.c_str());
            return kExitOk;
        }
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const SolveError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNonConverged;
    }
    return kExitOk;
}
