#include <doctest.h>

#include <cmath>

#include "auditgame/common.hpp"
#include "auditgame/distributions.hpp"
#include "auditgame/scenario.hpp"
#include "oracles.hpp"

using namespace auditgame;

TEST_CASE("discretize_gaussian basic shape") {
    const auto d = discretize_gaussian(4.0, 1.0, 3);
    CHECK(d.support_min() == 1);
    CHECK(d.support_max() == 7);
    double total = 0.0;
    for (int n = 1; n <= 7; ++n) total += d.pmf(n);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // mode at the mean
    for (int n = 1; n <= 7; ++n)
        if (n != 4) CHECK(d.pmf(4) > d.pmf(n));
    CHECK(d.cdf(7) == doctest::Approx(1.0));
    CHECK(d.modeled_mass() < 1.0);
    CHECK(d.modeled_mass() > 0.99);
}

TEST_CASE("discretize_gaussian covers the documented supports") {
    CHECK(discretize_gaussian(6, 2, 5).support_max() == 11);
    CHECK(discretize_gaussian(6, 2, 5).support_min() == 1);
    CHECK(discretize_gaussian(5, 1.6, 4).support_max() == 9);
    // clamping: mean 2, halfwidth 4 would reach below 1
    const auto clamped = discretize_gaussian(2, 1, 4);
    CHECK(clamped.support_min() == 1);
    CHECK(clamped.support_max() == 6);
}

TEST_CASE("discretize_gaussian left cell matches an independent normal cdf") {
    const auto d = discretize_gaussian(4.0, 1.3, 3);
    CHECK(d.support_min() == 1);
    CHECK(d.support_max() == 7);
    // renormalized left-tail cell computed by quadrature, not erfc
    double cells[7];
    double total = 0.0;
    for (int n = 1; n <= 7; ++n) {
        cells[n - 1] = oracles::normal_cdf_quadrature((n + 0.5 - 4.0) / 1.3) -
                       oracles::normal_cdf_quadrature((n - 0.5 - 4.0) / 1.3);
        total += cells[n - 1];
    }
    CHECK(d.pmf(1) == doctest::Approx(cells[0] / total).epsilon(1e-9));
    CHECK(d.modeled_mass() == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("discretize_gaussian rejects an empty support") {
    CHECK_THROWS_AS(discretize_gaussian(-5.0, 1.0, 2), ValidationError);
    CHECK_THROWS_AS(discretize_gaussian(4.0, 0.0, 2), ValidationError);
    CHECK_THROWS_AS(discretize_gaussian(4.0, 1.0, -1), ValidationError);
}

TEST_CASE("empirical_distribution counts frequencies and clamps zeros") {
    const auto d = empirical_distribution({3, 3, 4});
    CHECK(d.pmf(3) == doctest::Approx(2.0 / 3.0));
    CHECK(d.pmf(4) == doctest::Approx(1.0 / 3.0));

    const auto point = empirical_distribution({5, 5, 5});
    CHECK(point.support_min() == 5);
    CHECK(point.support_max() == 5);
    CHECK(point.pmf(5) == doctest::Approx(1.0));

    const auto clamped = empirical_distribution({0, 2});
    CHECK(clamped.pmf(1) == doctest::Approx(0.5));
    CHECK(clamped.pmf(2) == doctest::Approx(0.5));

    CHECK_THROWS_AS(empirical_distribution({}), ValidationError);
}

TEST_CASE("sample_counts is deterministic and hits point masses") {
    JointCountModel model;
    model.per_type.push_back(empirical_distribution({5}));
    model.per_type.push_back(empirical_distribution({4}));
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
        const auto z = sample_counts(model, rng);
        CHECK(z[0] == 5);
        CHECK(z[1] == 4);
    }

    JointCountModel syn = build_syn_a().count_model();
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(sample_counts(syn, a) == sample_counts(syn, b));
}

TEST_CASE("sample mean converges to the pmf mean") {
    const auto d = discretize_gaussian(4.0, 1.0, 3);
    double variance = 0.0;
    for (int n = d.support_min(); n <= d.support_max(); ++n)
        variance += d.pmf(n) * (n - d.mean()) * (n - d.mean());
    const int samples = 100000;
    Rng rng(99);
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) sum += d.sample(rng);
    const double stderr_mean = std::sqrt(variance / samples);
    CHECK(std::abs(sum / samples - d.mean()) < 3.0 * stderr_mean);
}

TEST_CASE("enumerate_joint visits the whole product support") {
    const JointCountModel model = build_syn_a().count_model();
    CHECK(model.joint_support_size() == 11LL * 9 * 7 * 7);
    long long visits = 0;
    double total = 0.0;
    enumerate_joint(model, [&](const std::vector<int>&, double p) {
        ++visits;
        total += p;
    });
    CHECK(visits == 4851);
    CHECK(std::abs(total - 1.0) < 1e-9);

    CHECK_THROWS_AS(enumerate_joint(model, [](const std::vector<int>&, double) {}, 100),
                    SolveError);
}

TEST_CASE("enumerate_joint on point masses yields one realization") {
    JointCountModel model;
    model.per_type.push_back(empirical_distribution({2}));
    model.per_type.push_back(empirical_distribution({9}));
    int visits = 0;
    enumerate_joint(model, [&](const std::vector<int>& z, double p) {
        ++visits;
        CHECK(z == std::vector<int>{2, 9});
        CHECK(p == doctest::Approx(1.0));
    });
    CHECK(visits == 1);
}
