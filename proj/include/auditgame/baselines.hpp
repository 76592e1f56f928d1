#pragma once

#include <cstdint>

#include "auditgame/game.hpp"
#include "auditgame/threshold_search.hpp"

namespace auditgame {

enum class BaselineKind { RandomOrders, RandomThresholds, BenefitGreedy };

inline constexpr int kDefaultRandomOrderRepeats = 2000;
inline constexpr int kDefaultRandomThresholdRepeats = 5000;

// Uniform mixture over `repeats` distinct random orderings at the supplied
// thresholds (by convention the iterative-shrink result at eps = 0.1).
// `repeats` above the number of permitted orderings is clamped; `clamped`
// reports that back for a caller-side warning. When `per_draw_average` is set,
// each sampled ordering is instead played as a pure policy and the reported
// objective is the average over draws.
GameSolution baseline_random_orders(const Scenario& scenario, const JointCountModel& model,
                                    const ThresholdVector& thresholds, int repeats,
                                    std::uint64_t seed, EvalMode mode,
                                    bool per_draw_average = false, bool* clamped = nullptr);

// Each repeat draws integer thresholds uniformly from [0, J_t], rejecting
// vectors with sum(b) < B, and solves the ordering game. The returned
// objective is the mean over repeats; the policy and best-response data come
// from the best draw (best-draw objective sits in the diagnostics).
GameSolution baseline_random_thresholds(const Scenario& scenario, const JointCountModel& model,
                                        int repeats, std::uint64_t seed, InnerSolver inner,
                                        EvalMode mode, unsigned threads = 0);

// Pure policy: types in descending benefit order, every threshold set to the
// whole budget, so each type is audited exhaustively before the next.
GameSolution baseline_benefit_greedy(const Scenario& scenario, const JointCountModel& model,
                                     EvalMode mode);

}  // namespace auditgame
