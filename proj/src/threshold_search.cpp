#include "auditgame/threshold_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "auditgame/common.hpp"
#include "auditgame/parallel.hpp"

namespace auditgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GameSolution inner_solve(const Scenario& scenario, const JointCountModel& model,
                         const ThresholdVector& thresholds, InnerSolver inner, EvalMode mode) {
    return inner == InnerSolver::Full ? solve_full(scenario, thresholds, model, mode)
                                      : solve_cggs(scenario, thresholds, model, mode);
}

std::vector<double> to_doubles(const std::vector<long long>& b) {
    return std::vector<double>(b.begin(), b.end());
}

// Size-l index combinations of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int l) {
    std::vector<std::vector<int>> out;
    std::vector<int> combo(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) combo[static_cast<std::size_t>(i)] = i;
    for (;;) {
        out.push_back(combo);
        int k = l - 1;
        while (k >= 0 && combo[static_cast<std::size_t>(k)] == n - l + k) --k;
        if (k < 0) break;
        ++combo[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < l; ++j)
            combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

long long shrink(long long value, double ratio) {
    return static_cast<long long>(std::floor(static_cast<double>(value) * ratio + 1e-9));
}

}  // namespace

ThresholdUpperBounds threshold_upper_bounds(const Scenario& scenario) {
    ThresholdUpperBounds bounds;
    const JointCountModel model = scenario.count_model();
    for (int t = 0; t < scenario.num_types(); ++t) {
        const double budget_units =
            model.per_type[static_cast<std::size_t>(t)].support_max() *
            scenario.alert_types[static_cast<std::size_t>(t)].audit_cost;
        bounds.per_type.push_back(static_cast<long long>(std::ceil(budget_units - 1e-9)));
    }
    return bounds;
}

std::pair<GameSolution, IshmTrace> ishm(const Scenario& scenario, const JointCountModel& model,
                                        const IshmOptions& options, EvalMode mode) {
    if (!(options.epsilon > 0.0 && options.epsilon < 1.0))
        throw ValidationError("ishm: epsilon must lie in (0,1)");
    const int num_types = scenario.num_types();
    const double budget = scenario.total_budget;
    const int num_steps = static_cast<int>(std::ceil(1.0 / options.epsilon - 1e-12));

    IshmTrace trace;
    std::map<std::vector<long long>, GameSolution> memo;
    std::mutex memo_mutex;

    const auto feasible = [&](const std::vector<long long>& b) {
        long long total = 0;
        for (long long v : b) total += v;
        return static_cast<double>(total) >= budget - 1e-9;
    };
    // Solves (through the memo) without touching the explored counter.
    const auto solve_candidate = [&](const std::vector<long long>& b) -> GameSolution {
        {
            std::lock_guard<std::mutex> lk(memo_mutex);
            auto it = memo.find(b);
            if (it != memo.end()) return it->second;
        }
        GameSolution sol = inner_solve(scenario, model, to_doubles(b), options.inner, mode);
        std::lock_guard<std::mutex> lk(memo_mutex);
        return memo.emplace(b, std::move(sol)).first->second;
    };

    std::vector<long long> current = threshold_upper_bounds(scenario).per_type;

    // The starting vector is evaluated (and counted) but the incumbent
    // objective starts at +inf, so the first round always commits its best
    // candidate; see accepted[0].
    GameSolution incumbent_solution = solve_candidate(current);
    trace.explored_count += 1;
    double incumbent_objective = kInf;

    int subset_size = 1;
    while (subset_size <= num_types) {
        const auto combos = combinations(num_types, subset_size);
        int completed_steps = 0;
        bool improved = false;
        for (int step = 1; step <= num_steps && !improved; ++step) {
            const double ratio = std::max(0.0, 1.0 - step * options.epsilon);
            std::vector<std::vector<long long>> candidates(combos.size());
            std::vector<double> objectives(combos.size(), kInf);
            std::vector<char> evaluated(combos.size(), 0);
            for (std::size_t j = 0; j < combos.size(); ++j) {
                candidates[j] = current;
                for (int k : combos[j])
                    candidates[j][static_cast<std::size_t>(k)] =
                        shrink(current[static_cast<std::size_t>(k)], ratio);
            }
            parallel_for(
                combos.size(),
                [&](std::size_t j) {
                    if (!feasible(candidates[j])) return;  // scored +inf
                    objectives[j] = solve_candidate(candidates[j]).objective;
                    evaluated[j] = 1;
                },
                options.threads);
            for (std::size_t j = 0; j < combos.size(); ++j)
                trace.explored_count += (evaluated[j] || options.count_infeasible) ? 1 : 0;

            std::size_t best_j = 0;
            double best = kInf;
            for (std::size_t j = 0; j < combos.size(); ++j) {
                if (objectives[j] < best) {
                    best = objectives[j];
                    best_j = j;
                }
            }
            if (best < incumbent_objective - 1e-9) {
                current = candidates[best_j];
                incumbent_objective = best;
                incumbent_solution = solve_candidate(current);
                trace.accepted.emplace_back(current, best);
                improved = true;
                break;
            }
            completed_steps = step;
        }
        subset_size = (completed_steps == num_steps) ? subset_size + 1 : 1;
    }

    trace.final_thresholds = current;
    trace.final_objective =
        std::isinf(incumbent_objective) ? incumbent_solution.objective : incumbent_objective;
    return {incumbent_solution, trace};
}

BruteForceResult brute_force_thresholds(const Scenario& scenario, const JointCountModel& model,
                                        EvalMode mode, bool enforce_budget_sum, long long cap,
                                        unsigned threads) {
    const std::vector<long long> bounds = threshold_upper_bounds(scenario).per_type;
    const int num_types = scenario.num_types();
    long long total = 1;
    for (long long j : bounds) {
        const long long base = j + 1;
        if (total > cap / base)
            throw SolveError("brute force: threshold grid exceeds cap of " + std::to_string(cap));
        total *= base;
    }

    const double budget = scenario.total_budget;
    const auto decode = [&](long long index) {
        std::vector<long long> b(static_cast<std::size_t>(num_types));
        for (int t = num_types - 1; t >= 0; --t) {
            const long long base = bounds[static_cast<std::size_t>(t)] + 1;
            b[static_cast<std::size_t>(t)] = index % base;
            index /= base;
        }
        return b;  // index 0 -> all zeros; lexicographic in t-major order
    };

    struct ChunkBest {
        double objective = kInf;
        long long index = -1;
        long long solved = 0;
    };
    unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (workers == 0) workers = 4;
    const long long chunk = std::max<long long>(1, (total + workers - 1) / workers);
    const std::size_t num_chunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
    std::vector<ChunkBest> best_per_chunk(num_chunks);
    parallel_for(
        num_chunks,
        [&](std::size_t ci) {
            ChunkBest best;
            const long long lo = static_cast<long long>(ci) * chunk;
            const long long hi = std::min(total, lo + chunk);
            for (long long index = lo; index < hi; ++index) {
                const std::vector<long long> b = decode(index);
                if (enforce_budget_sum) {
                    long long sum = 0;
                    for (long long v : b) sum += v;
                    if (static_cast<double>(sum) < budget - 1e-9) continue;
                }
                ++best.solved;
                const double obj =
                    inner_solve(scenario, model, to_doubles(b), InnerSolver::Full, mode).objective;
                if (obj < best.objective - 1e-12) {
                    best.objective = obj;
                    best.index = index;
                }
            }
            best_per_chunk[ci] = best;
        },
        threads);

    BruteForceResult result;
    result.vectors_total = total;
    double best_obj = kInf;
    long long best_index = -1;
    for (const auto& cb : best_per_chunk) {
        result.vectors_solved += cb.solved;
        if (cb.index >= 0 && cb.objective < best_obj - 1e-12) {
            best_obj = cb.objective;
            best_index = cb.index;
        }
    }
    if (best_index < 0)
        throw SolveError("brute force: no feasible threshold vector (sum of bounds below budget)");
    result.thresholds = decode(best_index);
    result.solution =
        inner_solve(scenario, model, to_doubles(result.thresholds), InnerSolver::Full, mode);
    return result;
}

double precision_gamma(const std::vector<double>& approx_values,
                       const std::vector<double>& optimal_values) {
    if (approx_values.size() != optimal_values.size() || approx_values.empty())
        throw ValidationError("precision_gamma: value lists must be nonempty and equal-length");
    double deviation = 0.0;
    for (std::size_t i = 0; i < approx_values.size(); ++i) {
        if (optimal_values[i] == 0.0)
            throw ValidationError("precision_gamma: optimal value of 0 at index " +
                                  std::to_string(i));
        deviation += std::abs(approx_values[i] - optimal_values[i]) / std::abs(optimal_values[i]);
    }
    return 1.0 - deviation / static_cast<double>(approx_values.size());
}

}  // namespace auditgame
