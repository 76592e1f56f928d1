// Test-only oracles, independent of the library's computation paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "auditgame/game.hpp"
#include "auditgame/lp.hpp"
#include "auditgame/rng.hpp"

namespace oracles {

// Standard normal CDF by Simpson quadrature of the density (no erf/erfc).
inline double normal_cdf_quadrature(double x) {
    const double sign = x < 0 ? -1.0 : 1.0;
    const double upper = std::abs(x);
    const int n = 4000;  // even
    const double h = upper / n;
    double sum = 1.0 + std::exp(-upper * upper / 2.0);
    for (int i = 1; i < n; ++i) {
        const double t = i * h;
        sum += (i % 2 ? 4.0 : 2.0) * std::exp(-t * t / 2.0);
    }
    const double integral = sum * h / 3.0 / std::sqrt(2.0 * 3.14159265358979323846);
    return 0.5 + sign * integral;
}

// Minimum objective over all basic feasible points of
//   min c.x  s.t. rows, x >= 0
// by enumerating every choice of n active planes. Assumes a vertex optimum
// exists (feasible and bounded instances).
inline std::optional<double> vertex_enumeration_minimum(const auditgame::LinearProgram& lp) {
    const int n = lp.num_vars;
    struct Plane {
        std::vector<double> a;
        double b;
    };
    std::vector<Plane> planes;
    for (const auto& row : lp.rows) planes.push_back({row.coeffs, row.rhs});
    for (int j = 0; j < n; ++j) {
        std::vector<double> a(static_cast<std::size_t>(n), 0.0);
        a[static_cast<std::size_t>(j)] = 1.0;
        planes.push_back({a, 0.0});
    }
    const int p = static_cast<int>(planes.size());
    std::vector<int> pick(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
    std::optional<double> best;
    for (;;) {
        // Solve the n x n system of the picked planes.
        std::vector<double> m(static_cast<std::size_t>(n) * (n + 1));
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c)
                m[static_cast<std::size_t>(r) * (n + 1) + c] =
                    planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])]
                        .a[static_cast<std::size_t>(c)];
            m[static_cast<std::size_t>(r) * (n + 1) + n] =
                planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])].b;
        }
        bool singular = false;
        for (int col = 0; col < n && !singular; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(m[static_cast<std::size_t>(r) * (n + 1) + col]) >
                    std::abs(m[static_cast<std::size_t>(piv) * (n + 1) + col]))
                    piv = r;
            if (std::abs(m[static_cast<std::size_t>(piv) * (n + 1) + col]) < 1e-10) {
                singular = true;
                break;
            }
            for (int c = 0; c <= n; ++c)
                std::swap(m[static_cast<std::size_t>(col) * (n + 1) + c],
                          m[static_cast<std::size_t>(piv) * (n + 1) + c]);
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                const double f = m[static_cast<std::size_t>(r) * (n + 1) + col] /
                                 m[static_cast<std::size_t>(col) * (n + 1) + col];
                if (f == 0.0) continue;
                for (int c = col; c <= n; ++c)
                    m[static_cast<std::size_t>(r) * (n + 1) + c] -=
                        f * m[static_cast<std::size_t>(col) * (n + 1) + c];
            }
        }
        if (!singular) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (int r = 0; r < n; ++r)
                x[static_cast<std::size_t>(r)] = m[static_cast<std::size_t>(r) * (n + 1) + n] /
                                                 m[static_cast<std::size_t>(r) * (n + 1) + r];
            bool feasible = true;
            for (int j = 0; j < n && feasible; ++j)
                feasible = x[static_cast<std::size_t>(j)] >= -1e-7;
            for (const auto& row : lp.rows) {
                if (!feasible) break;
                double lhs = 0.0;
                for (int j = 0; j < n; ++j)
                    lhs += row.coeffs[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
                if (row.sense == '<') feasible = lhs <= row.rhs + 1e-7;
                else if (row.sense == '>') feasible = lhs >= row.rhs - 1e-7;
                else feasible = std::abs(lhs - row.rhs) <= 1e-7;
            }
            if (feasible) {
                double obj = 0.0;
                for (int j = 0; j < n; ++j)
                    obj += lp.objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
                if (!best || obj < *best) best = obj;
            }
        }
        int k = n - 1;
        while (k >= 0 && pick[static_cast<std::size_t>(k)] == p - n + k) --k;
        if (k < 0) break;
        ++pick[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < n; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

// Random feasible-and-bounded LP: rows pass through a random interior point
// with slack in the direction of their sense, plus a box row.
inline auditgame::LinearProgram random_feasible_lp(auditgame::Rng& rng) {
    const int n = static_cast<int>(rng.next_int(1, 5));
    const int m = static_cast<int>(rng.next_int(1, 6));
    auditgame::LinearProgram lp(n);
    std::vector<double> interior(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        interior[static_cast<std::size_t>(j)] = 0.1 + 4.9 * rng.next_double();
        lp.objective[static_cast<std::size_t>(j)] = -3.0 + 6.0 * rng.next_double();
    }
    for (int r = 0; r < m; ++r) {
        std::vector<double> a(static_cast<std::size_t>(n));
        double dot = 0.0;
        for (int j = 0; j < n; ++j) {
            a[static_cast<std::size_t>(j)] = -3.0 + 6.0 * rng.next_double();
            dot += a[static_cast<std::size_t>(j)] * interior[static_cast<std::size_t>(j)];
        }
        const int kind = static_cast<int>(rng.next_int(0, 9));
        if (kind == 0) {
            lp.add_row(std::move(a), '=', dot);
        } else if (kind % 2 == 0) {
            lp.add_row(std::move(a), '<', dot + 0.1 + 2.9 * rng.next_double());
        } else {
            lp.add_row(std::move(a), '>', dot - 0.1 - 2.9 * rng.next_double());
        }
    }
    std::vector<double> box(static_cast<std::size_t>(n), 1.0);
    double total = 10.0;
    for (double v : interior) total += v;
    lp.add_row(std::move(box), '<', total);
    return lp;
}

// Column generation with an exhaustive pricer: scans every permitted ordering
// for the most negative reduced cost. Terminates at the full-game optimum.
inline double column_generation_exhaustive(const auditgame::Scenario& scenario,
                                           const auditgame::ThresholdVector& thresholds,
                                           const auditgame::JointCountModel& model,
                                           auditgame::EvalMode mode) {
    using namespace auditgame;
    const std::vector<Ordering> all = permitted_orderings(scenario);
    DetectionEvaluator evaluator(scenario, thresholds, model, mode);
    std::vector<Ordering> columns = {all.front()};
    double value = 0.0;
    for (int round = 0; round < 1000; ++round) {
        const LinearProgram lp = build_master_lp(scenario, thresholds, columns, model, mode);
        const LpSolution sol = solve_lp(lp);
        value = sol.objective;
        const std::size_t cells = scenario.events.size();
        double best_rc = 0.0;
        const Ordering* best = nullptr;
        for (const auto& o : all) {
            if (std::find(columns.begin(), columns.end(), o) != columns.end()) continue;
            double rc = -sol.dual[cells];
            for (std::size_t i = 0; i < cells; ++i) {
                if (sol.dual[i] == 0.0) continue;
                rc += sol.dual[i] * evaluator.adversary_utility(o, scenario.events[i]);
            }
            if (rc < best_rc - 1e-9) {
                best_rc = rc;
                best = &o;
            }
        }
        if (!best) break;
        columns.push_back(*best);
    }
    return value;
}

}  // namespace oracles
