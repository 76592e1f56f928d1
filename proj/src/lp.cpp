#include "auditgame/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "auditgame/common.hpp"

namespace auditgame {

namespace {

constexpr double kPivotTol = 1e-9;      // feasibility / optimality tolerance
constexpr int kStallLimit = 64;         // degenerate pivots before switching to Bland

// Standard-form tableau: min c.x, A x = b, x >= 0, b >= 0, with slack and
// artificial columns appended after the structural ones.
struct Tableau {
    int rows = 0;
    int cols = 0;  // structural + slack + artificial (rhs kept separately)
    std::vector<double> a;     // rows x cols
    std::vector<double> rhs;   // per row
    std::vector<double> obj;   // reduced-cost row, length cols
    double obj_rhs = 0.0;      // negative of current objective value
    std::vector<int> basis;    // basic column per row
    int first_artificial = 0;  // columns >= this are artificial
    int iterations = 0;

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    void pivot(int pr, int pc) {
        const double inv = 1.0 / at(pr, pc);
        for (int c = 0; c < cols; ++c) at(pr, c) *= inv;
        rhs[static_cast<std::size_t>(pr)] *= inv;
        at(pr, pc) = 1.0;
        for (int r = 0; r < rows; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (int c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
            rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(pr)];
            at(r, pc) = 0.0;
        }
        const double f = obj[static_cast<std::size_t>(pc)];
        if (f != 0.0) {
            for (int c = 0; c < cols; ++c) obj[static_cast<std::size_t>(c)] -= f * at(pr, c);
            obj_rhs -= f * rhs[static_cast<std::size_t>(pr)];
            obj[static_cast<std::size_t>(pc)] = 0.0;
        }
        basis[static_cast<std::size_t>(pr)] = pc;
        ++iterations;
    }

    // Rebuilds the reduced-cost row for cost vector c over the current basis.
    void price(const std::vector<double>& cost) {
        obj = cost;
        obj_rhs = 0.0;
        for (int r = 0; r < rows; ++r) {
            const double cb = cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])];
            if (cb == 0.0) continue;
            for (int c = 0; c < cols; ++c) obj[static_cast<std::size_t>(c)] -= cb * at(r, c);
            obj_rhs -= cb * rhs[static_cast<std::size_t>(r)];
        }
    }

    // Returns true on optimality, false on unboundedness. Columns whose ratio
    // test finds no pivotable row are blocked (cleared after any pivot): a
    // near-zero column with a noise-level reduced cost is not an unbounded ray.
    bool run(bool allow_artificials, int max_iterations) {
        int stalled = 0;
        bool bland = false;
        double last_obj = -obj_rhs;
        std::vector<char> blocked(static_cast<std::size_t>(cols), 0);
        while (iterations < max_iterations) {
            int entering = -1;
            if (bland) {
                for (int c = 0; c < cols; ++c) {
                    if (!allow_artificials && c >= first_artificial) break;
                    if (!blocked[static_cast<std::size_t>(c)] &&
                        obj[static_cast<std::size_t>(c)] < -kPivotTol) {
                        entering = c;
                        break;
                    }
                }
            } else {
                double best = -kPivotTol;
                for (int c = 0; c < cols; ++c) {
                    if (!allow_artificials && c >= first_artificial) break;
                    if (!blocked[static_cast<std::size_t>(c)] &&
                        obj[static_cast<std::size_t>(c)] < best) {
                        best = obj[static_cast<std::size_t>(c)];
                        entering = c;
                    }
                }
            }
            if (entering < 0) return true;
            int leaving = -1;
            double best_ratio = 0.0;
            double best_coef = 0.0;
            for (int r = 0; r < rows; ++r) {
                const double coef = at(r, entering);
                if (coef <= kPivotTol) continue;
                const double ratio = rhs[static_cast<std::size_t>(r)] / coef;
                if (leaving < 0 || ratio < best_ratio - kPivotTol) {
                    leaving = r;
                    best_ratio = ratio;
                    best_coef = coef;
                } else if (ratio < best_ratio + kPivotTol) {
                    const bool take =
                        bland ? basis[static_cast<std::size_t>(r)] <
                                    basis[static_cast<std::size_t>(leaving)]
                              : coef > best_coef;
                    if (take) {
                        leaving = r;
                        best_ratio = std::min(best_ratio, ratio);
                        best_coef = coef;
                    }
                }
            }
            if (leaving < 0) {
                if (obj[static_cast<std::size_t>(entering)] < -1e-6) return false;  // real ray
                blocked[static_cast<std::size_t>(entering)] = 1;
                continue;
            }
            pivot(leaving, entering);
            std::fill(blocked.begin(), blocked.end(), 0);
            const double cur = -obj_rhs;
            if (cur < last_obj - 1e-12) {
                stalled = 0;
                last_obj = cur;
            } else if (++stalled >= kStallLimit) {
                bland = true;
            }
        }
        return true;  // iteration cap; caller inspects stability
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const int n = lp.num_vars;
    if (static_cast<int>(lp.objective.size()) != n || static_cast<int>(lp.lower.size()) != n ||
        static_cast<int>(lp.upper.size()) != n)
        throw ValidationError("lp: objective/bounds length must equal num_vars");
    for (const auto& row : lp.rows) {
        if (static_cast<int>(row.coeffs.size()) != n)
            throw ValidationError("lp: row coefficient length must equal num_vars");
        if (row.sense != '<' && row.sense != '>' && row.sense != '=')
            throw ValidationError("lp: row sense must be one of '<', '>', '='");
        if (!std::isfinite(row.rhs)) throw ValidationError("lp: row rhs must be finite");
    }
    for (double c : lp.objective)
        if (!std::isfinite(c)) throw ValidationError("lp: objective must be finite");
    for (int j = 0; j < n; ++j) {
        const double lo = lp.lower[static_cast<std::size_t>(j)];
        const double up = lp.upper[static_cast<std::size_t>(j)];
        if (std::isnan(lo) || std::isnan(up) || (std::isinf(lo) && lo > 0) ||
            (std::isinf(up) && up < 0))
            throw ValidationError("lp: variable bounds must be finite, -inf lower, or +inf upper");
    }

    // Structural columns: shifted x - l for finite lower bounds, a +/- pair for
    // free variables. col_of[j] is the first column of variable j.
    std::vector<int> col_of(static_cast<std::size_t>(n), 0);
    std::vector<bool> is_free(static_cast<std::size_t>(n), false);
    std::vector<double> shift(static_cast<std::size_t>(n), 0.0);
    int structural = 0;
    for (int j = 0; j < n; ++j) {
        const double lo = lp.lower[static_cast<std::size_t>(j)];
        col_of[static_cast<std::size_t>(j)] = structural;
        if (std::isinf(lo) && lo < 0) {
            is_free[static_cast<std::size_t>(j)] = true;
            structural += 2;
        } else {
            shift[static_cast<std::size_t>(j)] = lo;
            structural += 1;
        }
    }

    // Internal rows: declared rows first, then finite-upper-bound rows.
    struct InternalRow {
        std::vector<double> coeffs;  // over structural columns
        char sense;
        double rhs;
        bool flipped = false;
        int declared_index = -1;
    };
    std::vector<InternalRow> internal;
    auto to_structural = [&](const std::vector<double>& coeffs) {
        std::vector<double> out(static_cast<std::size_t>(structural), 0.0);
        for (int j = 0; j < n; ++j) {
            const double v = coeffs[static_cast<std::size_t>(j)];
            if (v == 0.0) continue;
            out[static_cast<std::size_t>(col_of[static_cast<std::size_t>(j)])] += v;
            if (is_free[static_cast<std::size_t>(j)])
                out[static_cast<std::size_t>(col_of[static_cast<std::size_t>(j)]) + 1] -= v;
        }
        return out;
    };
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& row = lp.rows[i];
        InternalRow ir;
        ir.coeffs = to_structural(row.coeffs);
        ir.sense = row.sense;
        ir.rhs = row.rhs;
        for (int j = 0; j < n; ++j)
            ir.rhs -= row.coeffs[static_cast<std::size_t>(j)] * shift[static_cast<std::size_t>(j)];
        ir.declared_index = static_cast<int>(i);
        internal.push_back(std::move(ir));
    }
    for (int j = 0; j < n; ++j) {
        const double up = lp.upper[static_cast<std::size_t>(j)];
        if (std::isinf(up)) continue;
        std::vector<double> coeffs(static_cast<std::size_t>(n), 0.0);
        coeffs[static_cast<std::size_t>(j)] = 1.0;
        InternalRow ir;
        ir.coeffs = to_structural(coeffs);
        ir.sense = '<';
        ir.rhs = up - shift[static_cast<std::size_t>(j)];
        internal.push_back(std::move(ir));
    }
    for (auto& ir : internal) {
        if (ir.rhs < 0.0) {
            for (double& v : ir.coeffs) v = -v;
            ir.rhs = -ir.rhs;
            ir.sense = ir.sense == '<' ? '>' : (ir.sense == '>' ? '<' : '=');
            ir.flipped = true;
        }
    }

    const int m = static_cast<int>(internal.size());
    int num_slack = 0, num_artificial = 0;
    for (const auto& ir : internal) {
        if (ir.sense != '=') ++num_slack;
        if (ir.sense != '<') ++num_artificial;
    }

    Tableau tab;
    tab.rows = m;
    tab.first_artificial = structural + num_slack;
    tab.cols = structural + num_slack + num_artificial;
    tab.a.assign(static_cast<std::size_t>(tab.rows) * tab.cols, 0.0);
    tab.rhs.resize(static_cast<std::size_t>(m));
    tab.basis.assign(static_cast<std::size_t>(m), -1);

    std::vector<int> slack_col(static_cast<std::size_t>(m), -1);
    std::vector<int> artificial_col(static_cast<std::size_t>(m), -1);
    int next_slack = structural, next_artificial = tab.first_artificial;
    for (int r = 0; r < m; ++r) {
        const auto& ir = internal[static_cast<std::size_t>(r)];
        for (int c = 0; c < structural; ++c) tab.at(r, c) = ir.coeffs[static_cast<std::size_t>(c)];
        tab.rhs[static_cast<std::size_t>(r)] = ir.rhs;
        if (ir.sense == '<') {
            slack_col[static_cast<std::size_t>(r)] = next_slack;
            tab.at(r, next_slack) = 1.0;
            tab.basis[static_cast<std::size_t>(r)] = next_slack;
            ++next_slack;
        } else {
            if (ir.sense == '>') {
                slack_col[static_cast<std::size_t>(r)] = next_slack;
                tab.at(r, next_slack) = -1.0;
                ++next_slack;
            }
            artificial_col[static_cast<std::size_t>(r)] = next_artificial;
            tab.at(r, next_artificial) = 1.0;
            tab.basis[static_cast<std::size_t>(r)] = next_artificial;
            ++next_artificial;
        }
    }

    const int max_iterations = 2000 + 200 * (m + tab.cols);
    LpSolution sol;

    // Phase 1: minimize the artificial total.
    if (num_artificial > 0) {
        std::vector<double> cost(static_cast<std::size_t>(tab.cols), 0.0);
        for (int c = tab.first_artificial; c < tab.cols; ++c) cost[static_cast<std::size_t>(c)] = 1.0;
        tab.price(cost);
        tab.run(true, max_iterations);
        const double infeasibility = -tab.obj_rhs;
        if (infeasibility > 1e-7) {
            sol.status = LpStatus::Infeasible;
            sol.iterations = tab.iterations;
            return sol;
        }
        // Drive leftover artificials out of the basis where possible.
        for (int r = 0; r < m; ++r) {
            if (tab.basis[static_cast<std::size_t>(r)] < tab.first_artificial) continue;
            int pc = -1;
            for (int c = 0; c < tab.first_artificial; ++c) {
                if (std::abs(tab.at(r, c)) > 1e-7) {
                    pc = c;
                    break;
                }
            }
            if (pc >= 0) tab.pivot(r, pc);  // redundant rows keep a zero-valued artificial
        }
    }

    // Phase 2: minimize the real objective over structural columns.
    std::vector<double> cost(static_cast<std::size_t>(tab.cols), 0.0);
    double shift_constant = 0.0;
    for (int j = 0; j < n; ++j) {
        const double cj = lp.objective[static_cast<std::size_t>(j)];
        cost[static_cast<std::size_t>(col_of[static_cast<std::size_t>(j)])] += cj;
        if (is_free[static_cast<std::size_t>(j)])
            cost[static_cast<std::size_t>(col_of[static_cast<std::size_t>(j)]) + 1] -= cj;
        shift_constant += cj * shift[static_cast<std::size_t>(j)];
    }
    tab.price(cost);
    const bool optimal = tab.run(false, max_iterations);
    sol.iterations = tab.iterations;
    if (!optimal) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }
    if (tab.iterations >= max_iterations) sol.numerically_stable = false;

    // Primal solution.
    std::vector<double> xhat(static_cast<std::size_t>(tab.cols), 0.0);
    for (int r = 0; r < m; ++r)
        xhat[static_cast<std::size_t>(tab.basis[static_cast<std::size_t>(r)])] =
            tab.rhs[static_cast<std::size_t>(r)];
    sol.primal.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int c = col_of[static_cast<std::size_t>(j)];
        double v = xhat[static_cast<std::size_t>(c)];
        if (is_free[static_cast<std::size_t>(j)]) v -= xhat[static_cast<std::size_t>(c) + 1];
        sol.primal[static_cast<std::size_t>(j)] = v + shift[static_cast<std::size_t>(j)];
    }
    sol.objective = 0.0;
    for (int j = 0; j < n; ++j)
        sol.objective += lp.objective[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];

    // Duals from the reduced costs of each row's identity column:
    // rc(identity) = 0 - y_r * sigma, so y_r = -rc / sigma.
    std::vector<double> y(static_cast<std::size_t>(m), 0.0);
    double dual_objective = shift_constant;
    for (int r = 0; r < m; ++r) {
        double value;
        if (artificial_col[static_cast<std::size_t>(r)] >= 0) {
            value = -tab.obj[static_cast<std::size_t>(artificial_col[static_cast<std::size_t>(r)])];
        } else {
            value = -tab.obj[static_cast<std::size_t>(slack_col[static_cast<std::size_t>(r)])];
        }
        y[static_cast<std::size_t>(r)] = value;
        dual_objective += value * internal[static_cast<std::size_t>(r)].rhs;
    }
    sol.duality_gap = std::abs(sol.objective - dual_objective);
    sol.dual.assign(lp.rows.size(), 0.0);
    for (int r = 0; r < m; ++r) {
        const auto& ir = internal[static_cast<std::size_t>(r)];
        if (ir.declared_index < 0) continue;
        sol.dual[static_cast<std::size_t>(ir.declared_index)] =
            ir.flipped ? -y[static_cast<std::size_t>(r)] : y[static_cast<std::size_t>(r)];
    }

    // Reduced costs per declared variable (the + column of a free pair).
    sol.reduced_costs.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        sol.reduced_costs[static_cast<std::size_t>(j)] =
            tab.obj[static_cast<std::size_t>(col_of[static_cast<std::size_t>(j)])];

    // Feasibility report over declared rows.
    for (const auto& row : lp.rows) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j)
            lhs += row.coeffs[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
        double violation = 0.0;
        if (row.sense == '<') violation = lhs - row.rhs;
        else if (row.sense == '>') violation = row.rhs - lhs;
        else violation = std::abs(lhs - row.rhs);
        sol.max_primal_violation = std::max(sol.max_primal_violation, violation);
    }
    if (sol.max_primal_violation > 1e-7) sol.numerically_stable = false;
    return sol;
}

}  // namespace auditgame
