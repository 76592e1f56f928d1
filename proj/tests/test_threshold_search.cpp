#include <doctest.h>

#include <cmath>

#include "auditgame/common.hpp"
#include "auditgame/scenario.hpp"
#include "auditgame/threshold_search.hpp"

using namespace auditgame;

namespace {

Scenario syn_a_at(double budget) {
    Scenario s = build_syn_a();
    s.total_budget = budget;
    return s;
}

}  // namespace

TEST_CASE("threshold upper bounds cover the count supports") {
    const auto bounds = threshold_upper_bounds(build_syn_a());
    CHECK(bounds.per_type == std::vector<long long>{11, 9, 7, 7});
}

TEST_CASE("brute force recovers the low-budget optimum") {
    const Scenario s = syn_a_at(2.0);
    const BruteForceResult r = brute_force_thresholds(s, s.count_model(), EvalMode::exact());
    CHECK(r.thresholds == std::vector<long long>{1, 1, 1, 1});
    CHECK(std::abs(r.solution.objective - 12.2945) < 0.05);
    CHECK(r.vectors_total == 12LL * 10 * 8 * 8);
    CHECK(r.vectors_solved < r.vectors_total);  // sum >= B filters a few vectors
}

TEST_CASE("brute force recovers the mid-budget optimum") {
    const Scenario s = syn_a_at(8.0);
    const BruteForceResult r = brute_force_thresholds(s, s.count_model(), EvalMode::exact());
    CHECK(r.thresholds == std::vector<long long>{3, 3, 2, 2});
    CHECK(std::abs(r.solution.objective - (-0.4517)) < 0.05);
}

TEST_CASE("brute force without the budget-sum filter solves the whole grid") {
    const Scenario s = syn_a_at(8.0);
    const BruteForceResult r =
        brute_force_thresholds(s, s.count_model(), EvalMode::exact(), false);
    CHECK(r.vectors_solved == r.vectors_total);
}

TEST_CASE("brute force enforces its cap") {
    const Scenario s = syn_a_at(2.0);
    CHECK_THROWS_AS(brute_force_thresholds(s, s.count_model(), EvalMode::exact(), true, 100),
                    SolveError);
}

TEST_CASE("zero budget leaves nothing to audit") {
    const Scenario s = syn_a_at(0.0);
    const BruteForceResult r = brute_force_thresholds(s, s.count_model(), EvalMode::exact());
    CHECK(r.thresholds == std::vector<long long>{0, 0, 0, 0});
    // no detection: every attacker collects its best reward minus attack cost
    double expected = 0.0;
    for (int e = 0; e < s.num_attackers(); ++e) {
        double best = -1e300;
        for (int v = 0; v < s.num_victims(); ++v)
            best = std::max(best, s.event(e, v).reward - s.event(e, v).attack_cost);
        expected += best;
    }
    CHECK(r.solution.objective == doctest::Approx(expected));
}

TEST_CASE("iterative shrinking finds the published cells") {
    SUBCASE("budget 4, fine step") {
        const Scenario s = syn_a_at(4.0);
        IshmOptions opt;
        opt.epsilon = 0.05;
        const auto [sol, trace] = ishm(s, s.count_model(), opt, EvalMode::exact());
        CHECK(trace.final_thresholds == std::vector<long long>{2, 1, 1, 2});
        CHECK(std::abs(trace.final_objective - 7.7176) / 7.7176 < 0.02);
    }
    SUBCASE("budget 18, step 0.1") {
        const Scenario s = syn_a_at(18.0);
        IshmOptions opt;
        opt.epsilon = 0.1;
        const auto [sol, trace] = ishm(s, s.count_model(), opt, EvalMode::exact());
        CHECK(trace.final_thresholds == std::vector<long long>{7, 6, 5, 5});
        CHECK(std::abs(trace.final_objective - (-7.4649)) / 7.4649 < 0.02);
    }
}

TEST_CASE("shrinking never beats the exhaustive optimum") {
    for (double budget : {4.0, 10.0, 16.0}) {
        const Scenario s = syn_a_at(budget);
        const JointCountModel model = s.count_model();
        const double optimum =
            brute_force_thresholds(s, model, EvalMode::exact()).solution.objective;
        IshmOptions opt;
        opt.epsilon = 0.1;
        const auto [sol, trace] = ishm(s, model, opt, EvalMode::exact());
        CHECK(trace.final_objective >= optimum - 1e-6);
    }
}

TEST_CASE("accepted objectives strictly decrease along the trace") {
    const Scenario s = syn_a_at(12.0);
    IshmOptions opt;
    opt.epsilon = 0.1;
    const auto [sol, trace] = ishm(s, s.count_model(), opt, EvalMode::exact());
    REQUIRE(!trace.accepted.empty());
    for (std::size_t i = 1; i < trace.accepted.size(); ++i)
        CHECK(trace.accepted[i].second < trace.accepted[i - 1].second - 1e-9);
    CHECK(trace.final_objective == doctest::Approx(trace.accepted.back().second));
    CHECK(trace.final_thresholds == trace.accepted.back().first);
}

TEST_CASE("identical runs produce identical traces") {
    const Scenario s = syn_a_at(10.0);
    IshmOptions opt;
    opt.epsilon = 0.2;
    const auto [sol1, t1] = ishm(s, s.count_model(), opt, EvalMode::exact());
    const auto [sol2, t2] = ishm(s, s.count_model(), opt, EvalMode::exact());
    CHECK(t1.explored_count == t2.explored_count);
    CHECK(t1.final_thresholds == t2.final_thresholds);
    CHECK(t1.accepted == t2.accepted);
    CHECK(sol1.objective == sol2.objective);
}

TEST_CASE("near-one step size degenerates to near-zero ratios") {
    // At budget 30 every shrunken candidate violates sum(b) >= B, so the
    // search keeps the initialization.
    const Scenario s = syn_a_at(30.0);
    IshmOptions opt;
    opt.epsilon = 0.999;
    const auto [sol, trace] = ishm(s, s.count_model(), opt, EvalMode::exact());
    CHECK(trace.final_thresholds == std::vector<long long>{11, 9, 7, 7});
    CHECK(trace.accepted.empty());
    // 1 initial + 2 steps x 15 combinations, all counted while infeasible
    CHECK(trace.explored_count == 31);

    IshmOptions quiet = opt;
    quiet.count_infeasible = false;
    const auto [sol2, trace2] = ishm(s, s.count_model(), quiet, EvalMode::exact());
    CHECK(trace2.explored_count == 1);
    CHECK(trace2.final_thresholds == trace.final_thresholds);
}

TEST_CASE("epsilon bounds are enforced") {
    const Scenario s = syn_a_at(4.0);
    IshmOptions opt;
    opt.epsilon = 0.0;
    CHECK_THROWS_AS(ishm(s, s.count_model(), opt, EvalMode::exact()), ValidationError);
    opt.epsilon = 1.0;
    CHECK_THROWS_AS(ishm(s, s.count_model(), opt, EvalMode::exact()), ValidationError);
}

TEST_CASE("explored counts stay far below the exhaustive grid") {
    const Scenario s = syn_a_at(10.0);
    IshmOptions opt;
    opt.epsilon = 0.2;
    const auto [sol, trace] = ishm(s, s.count_model(), opt, EvalMode::exact());
    CHECK(trace.explored_count * 10 <= 7680);
}

TEST_CASE("precision gamma") {
    CHECK(precision_gamma({1.0, 2.0}, {1.0, 2.0}) == doctest::Approx(1.0));
    CHECK(precision_gamma({1.1}, {1.0}) == doctest::Approx(0.9));
    CHECK_THROWS_AS(precision_gamma({1.0}, {0.0}), ValidationError);
    CHECK_THROWS_AS(precision_gamma({1.0, 2.0}, {1.0}), ValidationError);
    CHECK_THROWS_AS(precision_gamma({}, {}), ValidationError);
}
