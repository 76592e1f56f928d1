#pragma once

#include <limits>
#include <vector>

namespace auditgame {

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline constexpr double kLpInfinity = std::numeric_limits<double>::infinity();

// Dense linear program, minimization. Variable bounds default to [0, +inf);
// a lower bound of -inf makes the variable free.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;
    struct Row {
        std::vector<double> coeffs;
        char sense = '<';  // '<' (<=), '>' (>=), '='
        double rhs = 0.0;
    };
    std::vector<Row> rows;
    std::vector<double> lower;
    std::vector<double> upper;

    explicit LinearProgram(int n = 0) { resize(n); }
    void resize(int n) {
        num_vars = n;
        objective.assign(static_cast<std::size_t>(n), 0.0);
        lower.assign(static_cast<std::size_t>(n), 0.0);
        upper.assign(static_cast<std::size_t>(n), kLpInfinity);
    }
    void add_row(std::vector<double> coeffs, char sense, double rhs) {
        rows.push_back({std::move(coeffs), sense, rhs});
    }
};

// Dual sign convention under minimization: '>' rows have dual >= 0,
// '<' rows have dual <= 0, '=' rows are free.
struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    std::vector<double> primal;         // per declared variable
    std::vector<double> dual;           // per declared row
    std::vector<double> reduced_costs;  // per declared variable
    double objective = 0.0;
    int iterations = 0;
    double duality_gap = 0.0;           // |primal - dual objective| at termination
    double max_primal_violation = 0.0;  // worst declared-row violation
    bool numerically_stable = true;     // false when tolerances could not be met
};

// Two-phase dense tableau simplex. Deterministic: most-negative reduced cost
// with lowest-index ties, switching to Bland's rule after a pivot stall.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace auditgame
