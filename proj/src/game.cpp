#include "auditgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "auditgame/common.hpp"

namespace auditgame {

namespace {

constexpr double kSupportCutoff = 1e-6;     // mixture entries below this are dropped
constexpr double kReducedCostTol = 1e-9;

double event_utility(const DetectionEvaluator& evaluator, const Ordering& ordering,
                     const AttackEventSpec& event) {
    return evaluator.adversary_utility(ordering, event);
}

// Attackers with identical victim rows (triggers, reward, penalty, cost across
// all victims) are interchangeable in the master LP; they share one value
// variable weighted by the sum of their attack probabilities.
struct AttackerGroups {
    std::vector<int> group_of;        // per attacker
    std::vector<int> representative;  // one attacker index per group
    std::vector<double> weight;       // sum of p_e

    int count() const { return static_cast<int>(representative.size()); }
};

AttackerGroups group_attackers(const Scenario& scenario) {
    AttackerGroups groups;
    const int num_victims = scenario.num_victims();
    std::map<std::vector<double>, int> index;
    groups.group_of.resize(static_cast<std::size_t>(scenario.num_attackers()));
    for (int e = 0; e < scenario.num_attackers(); ++e) {
        std::vector<double> key;
        for (int v = 0; v < num_victims; ++v) {
            const auto& ev = scenario.event(e, v);
            key.push_back(ev.reward);
            key.push_back(ev.penalty);
            key.push_back(ev.attack_cost);
            for (const auto& [t, p] : ev.trigger_probs) {
                key.push_back(static_cast<double>(t));
                key.push_back(p);
            }
            key.push_back(-1.0);  // victim separator
        }
        auto [it, inserted] = index.try_emplace(std::move(key), groups.count());
        if (inserted) {
            groups.representative.push_back(e);
            groups.weight.push_back(0.0);
        }
        groups.group_of[static_cast<std::size_t>(e)] = it->second;
        groups.weight[static_cast<std::size_t>(it->second)] +=
            scenario.attackers[static_cast<std::size_t>(e)].attack_probability;
    }
    return groups;
}

// Master LP over attacker groups; variables are {p_o} then {u_g}.
LinearProgram build_grouped_master(const Scenario& scenario, const DetectionEvaluator& evaluator,
                                   const std::vector<Ordering>& orderings,
                                   const AttackerGroups& groups) {
    const int nq = static_cast<int>(orderings.size());
    const int ng = groups.count();
    const int num_victims = scenario.num_victims();
    LinearProgram lp(nq + ng);
    for (int g = 0; g < ng; ++g) {
        lp.objective[static_cast<std::size_t>(nq + g)] = groups.weight[static_cast<std::size_t>(g)];
        lp.lower[static_cast<std::size_t>(nq + g)] = -kLpInfinity;  // u_g is free
    }
    for (int g = 0; g < ng; ++g) {
        const int e = groups.representative[static_cast<std::size_t>(g)];
        for (int v = 0; v < num_victims; ++v) {
            std::vector<double> coeffs(static_cast<std::size_t>(nq + ng), 0.0);
            coeffs[static_cast<std::size_t>(nq + g)] = 1.0;
            for (int q = 0; q < nq; ++q)
                coeffs[static_cast<std::size_t>(q)] =
                    -event_utility(evaluator, orderings[static_cast<std::size_t>(q)],
                                   scenario.event(e, v));
            lp.add_row(std::move(coeffs), '>', 0.0);
        }
    }
    std::vector<double> normalization(static_cast<std::size_t>(nq + ng), 0.0);
    for (int q = 0; q < nq; ++q) normalization[static_cast<std::size_t>(q)] = 1.0;
    lp.add_row(std::move(normalization), '=', 1.0);
    return lp;
}

GameSolution extract_solution(const Scenario& scenario, const DetectionEvaluator& evaluator,
                              const std::vector<Ordering>& orderings,
                              const AttackerGroups& groups, const LpSolution& lp) {
    if (lp.status != LpStatus::Optimal)
        throw SolveError("master LP did not solve to optimality");
    GameSolution sol;
    sol.objective = lp.objective;
    sol.policy.thresholds = evaluator.thresholds();
    double kept = 0.0;
    for (std::size_t q = 0; q < orderings.size(); ++q) {
        const double p = lp.primal[q];
        if (p > kSupportCutoff) {
            sol.policy.mixture.emplace_back(orderings[q], p);
            kept += p;
        }
    }
    if (sol.policy.mixture.empty()) {  // all-degenerate LP; keep the heaviest column
        std::size_t best = 0;
        for (std::size_t q = 1; q < orderings.size(); ++q)
            if (lp.primal[q] > lp.primal[best]) best = q;
        sol.policy.mixture.emplace_back(orderings[best], 1.0);
        kept = 1.0;
    }
    for (auto& [o, p] : sol.policy.mixture) p /= kept;

    // Per-attacker best responses under the returned mixture.
    const int num_victims = scenario.num_victims();
    sol.attacker_values.resize(static_cast<std::size_t>(scenario.num_attackers()));
    sol.best_responses.resize(static_cast<std::size_t>(scenario.num_attackers()));
    std::vector<double> utility(static_cast<std::size_t>(groups.count()) * num_victims, 0.0);
    for (const auto& [ordering, prob] : sol.policy.mixture) {
        for (int g = 0; g < groups.count(); ++g) {
            const int e = groups.representative[static_cast<std::size_t>(g)];
            for (int v = 0; v < num_victims; ++v)
                utility[static_cast<std::size_t>(g) * num_victims + v] +=
                    prob * event_utility(evaluator, ordering, scenario.event(e, v));
        }
    }
    for (int e = 0; e < scenario.num_attackers(); ++e) {
        const int g = groups.group_of[static_cast<std::size_t>(e)];
        int best_v = 0;
        double best = utility[static_cast<std::size_t>(g) * num_victims];
        for (int v = 1; v < num_victims; ++v) {
            const double u = utility[static_cast<std::size_t>(g) * num_victims + v];
            if (u > best + 1e-12) {
                best = u;
                best_v = v;
            }
        }
        sol.attacker_values[static_cast<std::size_t>(e)] = best;
        sol.best_responses[static_cast<std::size_t>(e)] = best_v;
    }
    return sol;
}

struct PricingCore {
    const Scenario* scenario;
    const DetectionEvaluator* evaluator;
    // Per (group-or-attacker, victim) cell: dual weight plus event economics.
    struct Cell {
        double y;
        const AttackEventSpec* event;
    };
    std::vector<Cell> cells;
    double normalization_dual = 0.0;

    // score(t | prefix): marginal dual-weighted utility change of appending t.
    // Utilities are linear in per-type detections with coefficient
    // A_t = sum_c y_c (M_c - R_c) P^t_c, so only A_t * P_al(t | prefix) moves.
    PricingResult run() const {
        const int num_types = scenario->num_types();
        std::vector<double> type_weight(static_cast<std::size_t>(num_types), 0.0);
        for (const auto& cell : cells) {
            if (cell.y == 0.0) continue;
            for (const auto& [t, p] : cell.event->trigger_probs)
                type_weight[static_cast<std::size_t>(t)] +=
                    cell.y * (-cell.event->penalty - cell.event->reward) * p;
        }
        PricingResult result;
        std::uint32_t prefix = 0;
        for (int step = 0; step < num_types; ++step) {
            int best_t = -1;
            double best_score = 0.0;
            for (int t = 0; t < num_types; ++t) {
                if (prefix & (1u << t)) continue;
                const double score = type_weight[static_cast<std::size_t>(t)] *
                                     evaluator->detection_prob_type_after(prefix, t);
                if (best_t < 0 || score < best_score - 1e-15) {
                    best_t = t;
                    best_score = score;
                }
            }
            result.ordering.push_back(best_t);
            prefix |= 1u << best_t;
        }
        double rc = -normalization_dual;
        for (const auto& cell : cells) {
            if (cell.y == 0.0) continue;
            rc += cell.y * evaluator->adversary_utility(result.ordering, *cell.event);
        }
        result.reduced_cost = rc;
        return result;
    }
};

}  // namespace

UtilityMatrix build_utility_matrix(const DetectionEvaluator& evaluator,
                                   const std::vector<Ordering>& orderings) {
    const Scenario& scenario = evaluator.scenario();
    UtilityMatrix matrix;
    matrix.orderings = orderings;
    matrix.columns.reserve(orderings.size());
    for (const auto& o : orderings) {
        std::vector<double> column;
        column.reserve(scenario.events.size());
        for (const auto& ev : scenario.events) column.push_back(event_utility(evaluator, o, ev));
        matrix.columns.push_back(std::move(column));
    }
    return matrix;
}

LinearProgram build_master_lp(const Scenario& scenario, const ThresholdVector& thresholds,
                              const std::vector<Ordering>& orderings,
                              const JointCountModel& model, EvalMode mode) {
    if (orderings.empty()) throw SolveError("master LP requires at least one ordering");
    DetectionEvaluator evaluator(scenario, thresholds, model, mode);
    const int nq = static_cast<int>(orderings.size());
    const int ne = scenario.num_attackers();
    LinearProgram lp(nq + ne);
    for (int e = 0; e < ne; ++e) {
        lp.objective[static_cast<std::size_t>(nq + e)] =
            scenario.attackers[static_cast<std::size_t>(e)].attack_probability;
        lp.lower[static_cast<std::size_t>(nq + e)] = -kLpInfinity;
    }
    const UtilityMatrix matrix = build_utility_matrix(evaluator, orderings);
    for (std::size_t cell = 0; cell < scenario.events.size(); ++cell) {
        std::vector<double> coeffs(static_cast<std::size_t>(nq + ne), 0.0);
        coeffs[static_cast<std::size_t>(nq) + scenario.events[cell].attacker] = 1.0;
        for (int q = 0; q < nq; ++q)
            coeffs[static_cast<std::size_t>(q)] = -matrix.columns[static_cast<std::size_t>(q)][cell];
        lp.add_row(std::move(coeffs), '>', 0.0);
    }
    std::vector<double> normalization(static_cast<std::size_t>(nq + ne), 0.0);
    for (int q = 0; q < nq; ++q) normalization[static_cast<std::size_t>(q)] = 1.0;
    lp.add_row(std::move(normalization), '=', 1.0);
    return lp;
}

std::vector<Ordering> permitted_orderings(const Scenario& scenario, long long cap) {
    if (!scenario.ordering_whitelist.empty()) {
        if (static_cast<long long>(scenario.ordering_whitelist.size()) > cap)
            throw SolveError("ordering whitelist larger than the ordering cap");
        return scenario.ordering_whitelist;
    }
    const int num_types = scenario.num_types();
    long long total = 1;
    for (int t = 2; t <= num_types; ++t) {
        total *= t;
        if (total > cap)
            throw SolveError("|T|! = " + std::to_string(total) +
                             "+ orderings exceed the cap of " + std::to_string(cap) +
                             "; provide an ordering whitelist");
    }
    std::vector<Ordering> orderings;
    orderings.reserve(static_cast<std::size_t>(total));
    Ordering o(static_cast<std::size_t>(num_types));
    std::iota(o.begin(), o.end(), 0);
    do {
        orderings.push_back(o);
    } while (std::next_permutation(o.begin(), o.end()));
    return orderings;
}

GameSolution solve_full(const Scenario& scenario, const ThresholdVector& thresholds,
                        const JointCountModel& model, EvalMode mode, long long ordering_cap) {
    const std::vector<Ordering> orderings = permitted_orderings(scenario, ordering_cap);
    DetectionEvaluator evaluator(scenario, thresholds, model, mode);
    const AttackerGroups groups = group_attackers(scenario);
    const LinearProgram lp = build_grouped_master(scenario, evaluator, orderings, groups);
    const LpSolution lps = solve_lp(lp);
    GameSolution sol = extract_solution(scenario, evaluator, orderings, groups, lps);
    sol.diagnostics.lp_iterations = lps.iterations;
    sol.diagnostics.columns_generated = static_cast<int>(orderings.size());
    return sol;
}

Ordering benefit_sorted_ordering(const Scenario& scenario) {
    const int num_types = scenario.num_types();
    std::vector<double> benefit(static_cast<std::size_t>(num_types), 0.0);
    for (int t = 0; t < num_types; ++t) {
        if (scenario.alert_types[static_cast<std::size_t>(t)].benefit) {
            benefit[static_cast<std::size_t>(t)] =
                *scenario.alert_types[static_cast<std::size_t>(t)].benefit;
        } else {
            for (const auto& ev : scenario.events)
                if (ev.trigger_probs.count(t))
                    benefit[static_cast<std::size_t>(t)] =
                        std::max(benefit[static_cast<std::size_t>(t)], ev.reward);
        }
    }
    Ordering o(static_cast<std::size_t>(num_types));
    std::iota(o.begin(), o.end(), 0);
    std::stable_sort(o.begin(), o.end(), [&](int a, int b) {
        return benefit[static_cast<std::size_t>(a)] > benefit[static_cast<std::size_t>(b)];
    });
    return o;
}

PricingResult price_ordering_greedy(const Scenario& scenario, const ThresholdVector& thresholds,
                                    const std::vector<double>& duals,
                                    const JointCountModel& model, EvalMode mode) {
    const std::size_t cells = scenario.events.size();
    if (duals.size() != cells + 1)
        throw ValidationError("pricing duals: expected one multiplier per (attacker, victim) "
                              "row plus the normalization row");
    DetectionEvaluator evaluator(scenario, thresholds, model, mode);
    PricingCore core;
    core.scenario = &scenario;
    core.evaluator = &evaluator;
    core.normalization_dual = duals.back();
    core.cells.reserve(cells);
    for (std::size_t i = 0; i < cells; ++i)
        core.cells.push_back({duals[i], &scenario.events[i]});
    return core.run();
}

GameSolution solve_cggs(const Scenario& scenario, const ThresholdVector& thresholds,
                        const JointCountModel& model, EvalMode mode,
                        std::optional<Ordering> initial, int max_rounds,
                        const std::vector<Ordering>& warm_columns) {
    // Greedy pricing constructs arbitrary permutations, which cannot honor an
    // ordering whitelist; whitelisted games are small enough to solve exactly.
    if (!scenario.ordering_whitelist.empty())
        return solve_full(scenario, thresholds, model, mode);
    DetectionEvaluator evaluator(scenario, thresholds, model, mode);
    const AttackerGroups groups = group_attackers(scenario);
    const int num_victims = scenario.num_victims();

    std::vector<Ordering> columns;
    columns.push_back(initial ? *initial : benefit_sorted_ordering(scenario));
    if (!is_permutation_of_types(columns.front(), scenario.num_types()))
        throw ValidationError("initial ordering: not a permutation of all types");
    for (const auto& o : warm_columns) {
        if (!is_permutation_of_types(o, scenario.num_types()))
            throw ValidationError("warm-start ordering: not a permutation of all types");
        if (std::find(columns.begin(), columns.end(), o) == columns.end()) columns.push_back(o);
    }

    GameSolution sol;
    int rounds = 0;
    int lp_iterations = 0;
    bool converged = false;
    while (rounds < max_rounds) {
        ++rounds;
        const LinearProgram lp = build_grouped_master(scenario, evaluator, columns, groups);
        const LpSolution lps = solve_lp(lp);
        lp_iterations += lps.iterations;
        sol = extract_solution(scenario, evaluator, columns, groups, lps);

        PricingCore core;
        core.scenario = &scenario;
        core.evaluator = &evaluator;
        core.normalization_dual = lps.dual.back();
        for (int g = 0; g < groups.count(); ++g) {
            const int e = groups.representative[static_cast<std::size_t>(g)];
            for (int v = 0; v < num_victims; ++v)
                core.cells.push_back({lps.dual[static_cast<std::size_t>(g) * num_victims + v],
                                      &scenario.event(e, v)});
        }
        const PricingResult priced = core.run();
        const bool duplicate =
            std::find(columns.begin(), columns.end(), priced.ordering) != columns.end();
        if (priced.reduced_cost >= -kReducedCostTol || duplicate) {
            converged = true;
            break;
        }
        columns.push_back(priced.ordering);
    }
    sol.diagnostics.pricing_rounds = rounds;
    sol.diagnostics.columns_generated = static_cast<int>(columns.size()) - 1;
    sol.diagnostics.lp_iterations = lp_iterations;
    sol.diagnostics.converged = converged;
    return sol;
}

}  // namespace auditgame
