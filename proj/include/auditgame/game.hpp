#pragma once

#include <optional>
#include <vector>

#include "auditgame/lp.hpp"
#include "auditgame/mechanics.hpp"

namespace auditgame {

// Adversary utilities per ordering column over all (attacker, victim) pairs.
struct UtilityMatrix {
    std::vector<Ordering> orderings;
    // columns[q][e * |V| + v] = U_a(orderings[q], thresholds, <e,v>)
    std::vector<std::vector<double>> columns;
};

UtilityMatrix build_utility_matrix(const DetectionEvaluator& evaluator,
                                   const std::vector<Ordering>& orderings);

struct SolverDiagnostics {
    int columns_generated = 0;  // ordering columns admitted by pricing
    int lp_iterations = 0;      // simplex pivots across master solves
    int pricing_rounds = 0;
    bool converged = true;
    std::optional<double> best_draw_objective;  // randomized baselines only
};

struct GameSolution {
    AuditPolicy policy;
    double objective = 0.0;               // auditor's loss, sum_e p_e u_e
    std::vector<double> attacker_values;  // u_e
    std::vector<int> best_responses;      // victim index per attacker
    SolverDiagnostics diagnostics;
};

// Restricted master problem over ordering set Q: variables {p_o} then {u_e},
// minimize sum_e p_e u_e subject to u_e >= sum_o p_o U_a(o,b,<e,v>) for every
// (e,v) pair and sum_o p_o = 1.
LinearProgram build_master_lp(const Scenario& scenario, const ThresholdVector& thresholds,
                              const std::vector<Ordering>& orderings,
                              const JointCountModel& model, EvalMode mode);

inline constexpr long long kDefaultOrderingCap = 40320;  // 8!

// Permitted orderings: the scenario whitelist, or all |T|! permutations in
// lexicographic order. Throws SolveError above `cap`.
std::vector<Ordering> permitted_orderings(const Scenario& scenario,
                                          long long cap = kDefaultOrderingCap);

// Exact minimax value for fixed thresholds: master over every permitted ordering.
GameSolution solve_full(const Scenario& scenario, const ThresholdVector& thresholds,
                        const JointCountModel& model, EvalMode mode,
                        long long ordering_cap = kDefaultOrderingCap);

struct PricingResult {
    Ordering ordering;
    double reduced_cost = 0.0;
};

// Greedily grows an ordering, appending the type that most improves the
// dual-weighted utility of the partial column (unplaced types detect nothing),
// then prices the completed column exactly: rc = sum_ev y_ev U_a(o) - z.
// `duals` holds one multiplier per (e,v) row (attacker-major) followed by the
// normalization-row multiplier.
PricingResult price_ordering_greedy(const Scenario& scenario, const ThresholdVector& thresholds,
                                    const std::vector<double>& duals,
                                    const JointCountModel& model, EvalMode mode);

// Descending per-type benefit (ties toward the lower type index); the warm
// start for column generation.
Ordering benefit_sorted_ordering(const Scenario& scenario);

// Column generation with greedy pricing. Q starts from `initial` (default: the
// benefit-sorted ordering) plus any `warm_columns`. Stops when the priced
// column has nonnegative reduced cost or is already in Q; returns the last
// master solution (flagged non-converged if the round cap is hit). Scenarios
// with an ordering whitelist are delegated to solve_full, since greedy
// pricing cannot honor a whitelist.
GameSolution solve_cggs(const Scenario& scenario, const ThresholdVector& thresholds,
                        const JointCountModel& model, EvalMode mode,
                        std::optional<Ordering> initial = std::nullopt, int max_rounds = 500,
                        const std::vector<Ordering>& warm_columns = {});

}  // namespace auditgame
