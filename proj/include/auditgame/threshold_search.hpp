#pragma once

#include <utility>
#include <vector>

#include "auditgame/game.hpp"

namespace auditgame {

// Per-type search ceilings in budget units: the count-distribution support max
// times the audit cost, i.e. spending above J_t cannot buy more audits.
struct ThresholdUpperBounds {
    std::vector<long long> per_type;
};

ThresholdUpperBounds threshold_upper_bounds(const Scenario& scenario);

enum class InnerSolver { Full, Cggs };

struct IshmOptions {
    double epsilon = 0.1;                 // shrink step size, in (0,1)
    InnerSolver inner = InnerSolver::Full;
    bool count_infeasible = true;         // count sum(b) < B candidates as explored
    unsigned threads = 0;                 // 0 = hardware default
};

struct IshmTrace {
    long long explored_count = 0;  // LP evaluations, including the initial vector
    // Committed (thresholds, objective) pairs; objectives strictly decrease.
    std::vector<std::pair<std::vector<long long>, double>> accepted;
    std::vector<long long> final_thresholds;
    double final_objective = 0.0;
};

// Iterative threshold shrinking. Starts from the upper bounds, multiplies every
// size-l subset by ratio = max(0, 1 - i*eps) (floored to the integer grid),
// commits strict improvements, restarts the schedule on success, grows l on a
// full pass without improvement, and stops once l exceeds |T|. Candidates with
// sum(b) < B are infeasible and scored +inf.
std::pair<GameSolution, IshmTrace> ishm(const Scenario& scenario, const JointCountModel& model,
                                        const IshmOptions& options, EvalMode mode);

struct BruteForceResult {
    GameSolution solution;
    std::vector<long long> thresholds;
    long long vectors_total = 0;   // full grid, before the sum(b) >= B filter
    long long vectors_solved = 0;
};

inline constexpr long long kDefaultBruteForceCap = 1'000'000;

// Exhaustive integer grid search over [0, J_t] per type; ties go to the
// lexicographically smallest vector.
BruteForceResult brute_force_thresholds(const Scenario& scenario, const JointCountModel& model,
                                        EvalMode mode, bool enforce_budget_sum = true,
                                        long long cap = kDefaultBruteForceCap,
                                        unsigned threads = 0);

// Budget-averaged precision of a heuristic against per-budget optima:
// 1 - mean_i |approx_i - opt_i| / |opt_i|. Throws on a zero optimum.
double precision_gamma(const std::vector<double>& approx_values,
                       const std::vector<double>& optimal_values);

}  // namespace auditgame
