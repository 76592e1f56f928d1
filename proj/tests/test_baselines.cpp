#include <doctest.h>

#include <cmath>

#include "auditgame/baselines.hpp"
#include "auditgame/common.hpp"
#include "auditgame/scenario.hpp"

using namespace auditgame;

namespace {

Scenario syn_a_at(double budget) {
    Scenario s = build_syn_a();
    s.total_budget = budget;
    return s;
}

Scenario single_type_scenario() {
    Scenario s;
    s.name = "single";
    AlertTypeSpec t;
    t.id = "1";
    t.benefit = 2.0;
    t.count_model.kind = CountModelParams::Kind::Table;
    t.count_model.support_min = 3;
    t.count_model.pmf = {1.0};
    s.alert_types.push_back(t);
    s.attackers.push_back({"e1", 1.0});
    s.victims.push_back({"v1", false});
    AttackEventSpec ev;
    ev.attacker = 0;
    ev.victim = 0;
    ev.trigger_probs[0] = 1.0;
    ev.reward = 2.0;
    ev.penalty = 3.0;
    ev.attack_cost = 0.1;
    s.events.push_back(ev);
    s.total_budget = 1.0;
    s.validate();
    return s;
}

}  // namespace

TEST_CASE("random orders over a single type is the pure policy") {
    const Scenario s = single_type_scenario();
    const JointCountModel model = s.count_model();
    bool clamped = false;
    const GameSolution sol =
        baseline_random_orders(s, model, {1.0}, 50, 1, EvalMode::exact(), false, &clamped);
    CHECK(clamped);
    REQUIRE(sol.policy.mixture.size() == 1);
    AuditPolicy pure;
    pure.thresholds = {1.0};
    pure.mixture.emplace_back(Ordering{0}, 1.0);
    CHECK(sol.objective ==
          doctest::Approx(policy_value(pure, s, model, EvalMode::exact()).objective));
}

TEST_CASE("the uniform mixture over all orderings cannot beat the optimal mixture") {
    const Scenario s = syn_a_at(6.0);
    const JointCountModel model = s.count_model();
    const ThresholdVector b = {2, 2, 2, 2};
    const double optimal = solve_full(s, b, model, EvalMode::exact()).objective;
    const GameSolution uniform =
        baseline_random_orders(s, model, b, 24, 7, EvalMode::exact());
    CHECK(uniform.policy.mixture.size() == 24);
    CHECK(uniform.objective >= optimal - 1e-6);
}

TEST_CASE("random orders are deterministic in the seed") {
    const Scenario s = syn_a_at(6.0);
    const JointCountModel model = s.count_model();
    const GameSolution a = baseline_random_orders(s, model, {2, 2, 2, 2}, 6, 99, EvalMode::exact());
    const GameSolution b = baseline_random_orders(s, model, {2, 2, 2, 2}, 6, 99, EvalMode::exact());
    CHECK(a.objective == b.objective);
    CHECK(a.policy.mixture == b.policy.mixture);
}

TEST_CASE("per-draw averaging reports the mean pure-policy loss") {
    const Scenario s = syn_a_at(6.0);
    const JointCountModel model = s.count_model();
    const GameSolution mixture =
        baseline_random_orders(s, model, {2, 2, 2, 2}, 24, 7, EvalMode::exact());
    const GameSolution per_draw =
        baseline_random_orders(s, model, {2, 2, 2, 2}, 24, 7, EvalMode::exact(), true);
    // best-responding to each pure ordering is weakly better for the attackers
    CHECK(per_draw.objective >= mixture.objective - 1e-9);
    CHECK(per_draw.diagnostics.best_draw_objective.has_value());
}

TEST_CASE("a single random-threshold draw equals the full solve at that draw") {
    const Scenario s = syn_a_at(6.0);
    const JointCountModel model = s.count_model();
    const GameSolution sol =
        baseline_random_thresholds(s, model, 1, 123, InnerSolver::Full, EvalMode::exact());
    REQUIRE(sol.diagnostics.best_draw_objective.has_value());
    CHECK(sol.objective == doctest::Approx(*sol.diagnostics.best_draw_objective));
    const double redo = solve_full(s, sol.policy.thresholds, model, EvalMode::exact()).objective;
    CHECK(sol.objective == doctest::Approx(redo));
}

TEST_CASE("mean loss over random thresholds dominates the optimum") {
    const Scenario s = syn_a_at(10.0);
    const JointCountModel model = s.count_model();
    const double optimum =
        brute_force_thresholds(s, model, EvalMode::exact()).solution.objective;
    const GameSolution sol =
        baseline_random_thresholds(s, model, 100, 42, InnerSolver::Full, EvalMode::exact());
    CHECK(sol.objective >= optimum - 1e-6);
    CHECK(*sol.diagnostics.best_draw_objective <= sol.objective + 1e-9);
}

TEST_CASE("benefit-greedy audits the highest-loss type first and exhausts the budget") {
    const Scenario s = syn_a_at(6.0);
    const JointCountModel model = s.count_model();
    const GameSolution sol = baseline_benefit_greedy(s, model, EvalMode::exact());
    REQUIRE(sol.policy.mixture.size() == 1);
    CHECK(sol.policy.mixture[0].first == Ordering{3, 2, 1, 0});
    for (double b : sol.policy.thresholds) CHECK(b == doctest::Approx(6.0));

    const double optimal_same_thresholds =
        solve_full(s, sol.policy.thresholds, model, EvalMode::exact()).objective;
    CHECK(sol.objective >= optimal_same_thresholds - 1e-6);
}

TEST_CASE("equal benefits fall back to the identity ordering") {
    Scenario s = syn_a_at(6.0);
    for (auto& t : s.alert_types) t.benefit = 1.0;
    const GameSolution sol = baseline_benefit_greedy(s, s.count_model(), EvalMode::exact());
    CHECK(sol.policy.mixture[0].first == Ordering{0, 1, 2, 3});
}

TEST_CASE("benefit-greedy requires type-indexed benefits") {
    Scenario s = syn_a_at(6.0);
    s.alert_types[1].benefit.reset();
    CHECK_THROWS_AS(baseline_benefit_greedy(s, s.count_model(), EvalMode::exact()),
                    ValidationError);
}
