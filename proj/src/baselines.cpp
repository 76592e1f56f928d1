#include "auditgame/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "auditgame/common.hpp"
#include "auditgame/parallel.hpp"
#include "auditgame/rng.hpp"

namespace auditgame {

namespace {

GameSolution evaluate_fixed_policy(const Scenario& scenario, const JointCountModel& model,
                                   AuditPolicy policy, EvalMode mode) {
    const PolicyEvaluation eval = policy_value(policy, scenario, model, mode);
    GameSolution sol;
    sol.policy = std::move(policy);
    sol.objective = eval.objective;
    sol.attacker_values = eval.attacker_values;
    sol.best_responses = eval.best_victims;
    return sol;
}

}  // namespace

GameSolution baseline_random_orders(const Scenario& scenario, const JointCountModel& model,
                                    const ThresholdVector& thresholds, int repeats,
                                    std::uint64_t seed, EvalMode mode, bool per_draw_average,
                                    bool* clamped) {
    if (repeats < 1) throw ValidationError("baseline_random_orders: repeats must be >= 1");
    std::vector<Ordering> all = permitted_orderings(scenario);
    const int available = static_cast<int>(all.size());
    const int draws = std::min(repeats, available);
    if (clamped) *clamped = draws < repeats;

    // Distinct uniform sample: partial Fisher-Yates over the ordering list.
    Rng rng(seed);
    for (int i = 0; i < draws; ++i) {
        const long long j = rng.next_int(i, available - 1);
        std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
    }
    all.resize(static_cast<std::size_t>(draws));

    if (!per_draw_average) {
        AuditPolicy policy;
        policy.thresholds = thresholds;
        for (const auto& o : all)
            policy.mixture.emplace_back(o, 1.0 / static_cast<double>(draws));
        return evaluate_fixed_policy(scenario, model, std::move(policy), mode);
    }

    // Alternative reading: each draw is a pure policy attackers best-respond to.
    DetectionEvaluator evaluator(scenario, thresholds, model, mode);
    double total = 0.0;
    GameSolution best;
    bool have_best = false;
    for (const auto& o : all) {
        AuditPolicy policy;
        policy.thresholds = thresholds;
        policy.mixture.emplace_back(o, 1.0);
        GameSolution sol = evaluate_fixed_policy(scenario, model, std::move(policy), mode);
        total += sol.objective;
        if (!have_best || sol.objective < best.objective) {
            best = std::move(sol);
            have_best = true;
        }
    }
    best.diagnostics.best_draw_objective = best.objective;
    best.objective = total / static_cast<double>(draws);
    return best;
}

GameSolution baseline_random_thresholds(const Scenario& scenario, const JointCountModel& model,
                                        int repeats, std::uint64_t seed, InnerSolver inner,
                                        EvalMode mode, unsigned threads) {
    if (repeats < 1) throw ValidationError("baseline_random_thresholds: repeats must be >= 1");
    const std::vector<long long> bounds = threshold_upper_bounds(scenario).per_type;
    long long bound_sum = 0;
    for (long long j : bounds) bound_sum += j;
    if (static_cast<double>(bound_sum) < scenario.total_budget - 1e-9)
        throw SolveError("baseline_random_thresholds: no draw can satisfy sum(b) >= B");

    std::vector<GameSolution> solutions(static_cast<std::size_t>(repeats));
    parallel_for(
        static_cast<std::size_t>(repeats),
        [&](std::size_t r) {
            Rng rng = Rng::derive(seed, r);
            ThresholdVector b(bounds.size());
            for (;;) {
                double sum = 0.0;
                for (std::size_t t = 0; t < bounds.size(); ++t) {
                    b[t] = static_cast<double>(rng.next_int(0, bounds[t]));
                    sum += b[t];
                }
                if (sum >= scenario.total_budget - 1e-9) break;
            }
            solutions[r] = inner == InnerSolver::Full ? solve_full(scenario, b, model, mode)
                                                      : solve_cggs(scenario, b, model, mode);
        },
        threads);

    double total = 0.0;
    std::size_t best = 0;
    for (std::size_t r = 0; r < solutions.size(); ++r) {
        total += solutions[r].objective;
        if (solutions[r].objective < solutions[best].objective) best = r;
    }
    GameSolution sol = solutions[best];
    sol.diagnostics.best_draw_objective = sol.objective;
    sol.objective = total / static_cast<double>(repeats);
    return sol;
}

GameSolution baseline_benefit_greedy(const Scenario& scenario, const JointCountModel& model,
                                     EvalMode mode) {
    for (const auto& t : scenario.alert_types)
        if (!t.benefit)
            throw ValidationError("baseline_benefit_greedy: alert_types[" + t.id +
                                  "].benefit is required (type-indexed rewards)");
    Ordering ordering = benefit_sorted_ordering(scenario);
    if (!scenario.ordering_whitelist.empty()) {
        const auto& wl = scenario.ordering_whitelist;
        if (std::find(wl.begin(), wl.end(), ordering) == wl.end())
            throw ValidationError("baseline_benefit_greedy: the benefit-sorted ordering is not "
                                  "in the scenario's ordering whitelist");
    }
    AuditPolicy policy;
    policy.thresholds.assign(static_cast<std::size_t>(scenario.num_types()),
                             scenario.total_budget);
    policy.mixture.emplace_back(std::move(ordering), 1.0);
    return evaluate_fixed_policy(scenario, model, std::move(policy), mode);
}

}  // namespace auditgame
