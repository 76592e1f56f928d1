#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "auditgame/distributions.hpp"
#include "auditgame/scenario.hpp"

namespace auditgame {

// Permutation of all alert types; position i holds the type audited i-th.
using Ordering = std::vector<int>;

// Per-type budget caps, in budget units.
using ThresholdVector = std::vector<double>;

bool is_permutation_of_types(const Ordering& o, int num_types);

// Thresholds plus a mixed strategy over orderings: the auditor's commitment.
struct AuditPolicy {
    ThresholdVector thresholds;
    std::vector<std::pair<Ordering, double>> mixture;

    // Throws ValidationError: probabilities >= 0 summing to 1 (1e-9), distinct
    // valid orderings, thresholds >= 0 of length |T|.
    void validate(int num_types) const;
};

// How detection expectations are evaluated.
struct EvalMode {
    enum class Kind { Exact, MonteCarlo };
    Kind kind = Kind::Exact;
    int samples = 2000;
    std::uint64_t seed = 42;

    static EvalMode exact() { return {}; }
    static EvalMode monte_carlo(int samples, std::uint64_t seed) {
        return {Kind::MonteCarlo, samples, seed};
    }
};

// Budget left for type `type` (in audits of that type) after every earlier
// type in the ordering consumed min(threshold, count * cost):
//   max( floor((B - prefix_consumption) / C_type), 0 ).
long long remaining_budget(const Ordering& ordering, const ThresholdVector& thresholds,
                           const std::vector<int>& counts, int type, const Scenario& scenario);

// Number of type `type` alerts audited: min(remaining budget, floor(b_t/C_t), Z_t).
long long audited_count(const Ordering& ordering, const ThresholdVector& thresholds,
                        const std::vector<int>& counts, int type, const Scenario& scenario);

// Caches detection-probability computations for one (scenario, thresholds,
// model, mode) configuration across orderings. Exact mode convolves the
// prefix-consumption distribution per type; expectations depend on the prefix
// only through its set, so results are memoized per (type, prefix set).
// The internal caches are unsynchronized: use one evaluator per thread.
class DetectionEvaluator {
public:
    DetectionEvaluator(const Scenario& scenario, ThresholdVector thresholds,
                       const JointCountModel& model, EvalMode mode);
    ~DetectionEvaluator();
    DetectionEvaluator(DetectionEvaluator&&) noexcept;
    DetectionEvaluator& operator=(DetectionEvaluator&&) noexcept;

    // E[ n_t / Z_t ]: probability that an attack alert of type `type` is
    // audited under `ordering`.
    double detection_prob_type(const Ordering& ordering, int type) const;
    // Same, but the prefix is given as a set of types audited before `type`.
    double detection_prob_type_after(std::uint32_t prefix_mask, int type) const;

    double detection_prob_attack(const Ordering& ordering, const AttackEventSpec& event) const;
    double adversary_utility(const Ordering& ordering, const AttackEventSpec& event) const;

    const ThresholdVector& thresholds() const;
    const Scenario& scenario() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot conveniences matching the evaluator methods.
double detection_prob_type(const Ordering& ordering, const ThresholdVector& thresholds, int type,
                           const JointCountModel& model, const Scenario& scenario, EvalMode mode);
double detection_prob_attack(const Ordering& ordering, const ThresholdVector& thresholds,
                             const AttackEventSpec& event, const JointCountModel& model,
                             const Scenario& scenario, EvalMode mode);
double adversary_utility(const Ordering& ordering, const ThresholdVector& thresholds,
                         const AttackEventSpec& event, const JointCountModel& model,
                         const Scenario& scenario, EvalMode mode);

// U_a = P*( -penalty ) + (1-P)*reward - attack_cost.
inline double utility_from_detection(double detection_prob, double reward, double penalty,
                                     double attack_cost) {
    return detection_prob * (-penalty) + (1.0 - detection_prob) * reward - attack_cost;
}

struct PolicyEvaluation {
    double objective = 0.0;                // sum_e p_e * max_v mixture utility
    std::vector<double> attacker_values;   // the inner max per attacker
    std::vector<int> best_victims;         // argmax victim, ties to lowest index
};

// Evaluates a committed policy against best-responding attackers.
PolicyEvaluation policy_value(const AuditPolicy& policy, const Scenario& scenario,
                              const JointCountModel& model, EvalMode mode);

}  // namespace auditgame
