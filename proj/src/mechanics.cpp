#include "auditgame/mechanics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

#include "auditgame/common.hpp"

namespace auditgame {

bool is_permutation_of_types(const Ordering& o, int num_types) {
    if (o.size() != static_cast<std::size_t>(num_types)) return false;
    std::vector<char> used(static_cast<std::size_t>(num_types), 0);
    for (int t : o) {
        if (t < 0 || t >= num_types || used[static_cast<std::size_t>(t)]) return false;
        used[static_cast<std::size_t>(t)] = 1;
    }
    return true;
}

void AuditPolicy::validate(int num_types) const {
    if (thresholds.size() != static_cast<std::size_t>(num_types))
        throw ValidationError("policy.thresholds: length must equal the number of types");
    for (double b : thresholds)
        if (!(b >= 0.0)) throw ValidationError("policy.thresholds: entries must be >= 0");
    if (mixture.empty()) throw ValidationError("policy.mixture: must contain at least one ordering");
    double total = 0.0;
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        const auto& [o, p] = mixture[i];
        if (!is_permutation_of_types(o, num_types))
            throw ValidationError("policy.mixture: entry is not a permutation of all types");
        if (!(p >= 0.0)) throw ValidationError("policy.mixture: probabilities must be >= 0");
        for (std::size_t j = i + 1; j < mixture.size(); ++j)
            if (mixture[j].first == o)
                throw ValidationError("policy.mixture: duplicate ordering");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("policy.mixture: probabilities must sum to 1");
}

namespace {

int position_of(const Ordering& ordering, int type) {
    for (std::size_t i = 0; i < ordering.size(); ++i)
        if (ordering[i] == type) return static_cast<int>(i);
    throw ValidationError("ordering does not contain the requested type");
}

long long floor_div_guarded(double numerator, double denominator) {
    const double q = numerator / denominator;
    if (q <= 0.0) return 0;
    return static_cast<long long>(std::floor(q + 1e-9));
}

}  // namespace

long long remaining_budget(const Ordering& ordering, const ThresholdVector& thresholds,
                           const std::vector<int>& counts, int type, const Scenario& scenario) {
    const int pos = position_of(ordering, type);
    double consumed = 0.0;
    for (int i = 0; i < pos; ++i) {
        const int u = ordering[static_cast<std::size_t>(i)];
        consumed += std::min(thresholds[static_cast<std::size_t>(u)],
                             counts[static_cast<std::size_t>(u)] *
                                 scenario.alert_types[static_cast<std::size_t>(u)].audit_cost);
    }
    return floor_div_guarded(scenario.total_budget - consumed,
                             scenario.alert_types[static_cast<std::size_t>(type)].audit_cost);
}

long long audited_count(const Ordering& ordering, const ThresholdVector& thresholds,
                        const std::vector<int>& counts, int type, const Scenario& scenario) {
    const long long budget = remaining_budget(ordering, thresholds, counts, type, scenario);
    const long long cap = floor_div_guarded(
        thresholds[static_cast<std::size_t>(type)],
        scenario.alert_types[static_cast<std::size_t>(type)].audit_cost);
    return std::min({budget, cap, static_cast<long long>(counts[static_cast<std::size_t>(type)])});
}

// value -> probability pairs, sorted by value with exact duplicates merged
using ValueDist = std::vector<std::pair<double, double>>;

struct DetectionEvaluator::Impl {
    const Scenario* scenario;
    ThresholdVector thresholds;
    JointCountModel model;
    EvalMode mode;
    int num_types;
    double budget;

    // audits_expectation[t][m] = E[min(m, Z_t)/Z_t], m clamped to the support max
    std::vector<std::vector<double>> audits_expectation;
    std::vector<long long> threshold_cap;  // floor(b_t / C_t)

    // exact mode
    std::vector<ValueDist> consumption;                      // per type: min(b_t, Z_t*C_t)
    mutable std::unordered_map<std::uint32_t, ValueDist> conv_cache;

    // monte carlo mode
    std::vector<std::vector<int>> pool;                      // samples x types
    std::vector<std::uint32_t> pool_tail_bits;               // out-of-box types per sample
    mutable std::unordered_map<std::uint32_t, std::vector<double>> pool_consumption;

    mutable std::unordered_map<std::uint64_t, double> detection_cache;

    // P(count inside the modeled support), per type. Realizations outside the
    // coverage box contribute no detection.
    std::vector<double> modeled_mass;

    double cost(int t) const { return scenario->alert_types[static_cast<std::size_t>(t)].audit_cost; }

    void init() {
        num_types = scenario->num_types();
        budget = scenario->total_budget;
        if (thresholds.size() != static_cast<std::size_t>(num_types))
            throw ValidationError("thresholds: length must equal the number of types");
        for (double b : thresholds)
            if (!(b >= 0.0)) throw ValidationError("thresholds: entries must be >= 0");

        audits_expectation.resize(static_cast<std::size_t>(num_types));
        threshold_cap.resize(static_cast<std::size_t>(num_types));
        modeled_mass.resize(static_cast<std::size_t>(num_types));
        for (int t = 0; t < num_types; ++t) {
            const auto& dist = model.per_type[static_cast<std::size_t>(t)];
            modeled_mass[static_cast<std::size_t>(t)] = dist.modeled_mass();
            threshold_cap[static_cast<std::size_t>(t)] =
                floor_div_guarded(thresholds[static_cast<std::size_t>(t)], cost(t));
            // E[min(m,Z)/Z] = P(Z <= m) + m * E[1/Z ; Z > m], for m = 0..support_max
            const int hi = dist.support_max();
            std::vector<double>& h = audits_expectation[static_cast<std::size_t>(t)];
            h.assign(static_cast<std::size_t>(hi) + 1, 0.0);
            std::vector<double> inv_suffix(static_cast<std::size_t>(hi) + 2, 0.0);
            for (int z = hi; z >= 1; --z)
                inv_suffix[static_cast<std::size_t>(z)] =
                    inv_suffix[static_cast<std::size_t>(z) + 1] + dist.pmf(z) / z;
            double mass = 0.0;
            for (int m = 1; m <= hi; ++m) {
                mass += dist.pmf(m);
                h[static_cast<std::size_t>(m)] =
                    mass + m * inv_suffix[static_cast<std::size_t>(m) + 1];
            }
        }

        if (mode.kind == EvalMode::Kind::Exact) {
            consumption.resize(static_cast<std::size_t>(num_types));
            for (int t = 0; t < num_types; ++t) {
                const auto& dist = model.per_type[static_cast<std::size_t>(t)];
                ValueDist& cons = consumption[static_cast<std::size_t>(t)];
                for (int z = dist.support_min(); z <= dist.support_max(); ++z) {
                    const double value =
                        std::min(thresholds[static_cast<std::size_t>(t)], z * cost(t));
                    if (!cons.empty() && cons.back().first == value)
                        cons.back().second += dist.pmf(z);
                    else
                        cons.emplace_back(value, dist.pmf(z));
                }
            }
            conv_cache[0] = ValueDist{{0.0, 1.0}};
        } else {
            if (mode.samples < 1)
                throw ValidationError("monte carlo mode requires samples >= 1");
            Rng rng(mode.seed);
            pool.reserve(static_cast<std::size_t>(mode.samples));
            pool_tail_bits.reserve(static_cast<std::size_t>(mode.samples));
            for (int i = 0; i < mode.samples; ++i) {
                std::vector<int> z(static_cast<std::size_t>(num_types));
                std::uint32_t tails = 0;
                for (int t = 0; t < num_types; ++t) {
                    const double u = rng.next_double();
                    z[static_cast<std::size_t>(t)] =
                        model.per_type[static_cast<std::size_t>(t)].sample(rng);
                    if (u >= modeled_mass[static_cast<std::size_t>(t)]) tails |= 1u << t;
                }
                pool.push_back(std::move(z));
                pool_tail_bits.push_back(tails);
            }
            pool_consumption[0] = std::vector<double>(pool.size(), 0.0);
        }
    }

    static constexpr std::size_t kMaxConvolutionSize = 500'000;

    const ValueDist& prefix_distribution(std::uint32_t mask) const {
        auto it = conv_cache.find(mask);
        if (it != conv_cache.end()) return it->second;
        const int bit = std::countr_zero(mask);
        const ValueDist& rest = prefix_distribution(mask & (mask - 1));
        const ValueDist& cons = consumption[static_cast<std::size_t>(bit)];
        std::map<double, double> acc;
        for (const auto& [rv, rp] : rest)
            for (const auto& [cv, cp] : cons) acc[rv + cv] += rp * cp;
        if (acc.size() > kMaxConvolutionSize)
            throw SolveError("exact mode: prefix consumption support too large; "
                             "use monte carlo mode");
        ValueDist out(acc.begin(), acc.end());
        return conv_cache.emplace(mask, std::move(out)).first->second;
    }

    const std::vector<double>& prefix_sums(std::uint32_t mask) const {
        auto it = pool_consumption.find(mask);
        if (it != pool_consumption.end()) return it->second;
        const int bit = std::countr_zero(mask);
        const std::vector<double>& rest = prefix_sums(mask & (mask - 1));
        std::vector<double> out(rest.size());
        const double b = thresholds[static_cast<std::size_t>(bit)];
        const double c = cost(bit);
        for (std::size_t i = 0; i < pool.size(); ++i)
            out[i] = rest[i] + std::min(b, pool[i][static_cast<std::size_t>(bit)] * c);
        return pool_consumption.emplace(mask, std::move(out)).first->second;
    }

    double expected_audit_fraction(int type, double prefix_consumed, int realized = -1) const {
        long long m = floor_div_guarded(budget - prefix_consumed, cost(type));
        m = std::min(m, threshold_cap[static_cast<std::size_t>(type)]);
        if (realized >= 0) {  // single realization rather than expectation over Z_t
            const long long n = std::min(m, static_cast<long long>(realized));
            return static_cast<double>(n) / realized;
        }
        const auto& h = audits_expectation[static_cast<std::size_t>(type)];
        const long long idx = std::min(m, static_cast<long long>(h.size()) - 1);
        return h[static_cast<std::size_t>(idx)];
    }

    double detection(std::uint32_t prefix_mask, int type) const {
        if (prefix_mask & (1u << type))
            throw ValidationError("detection: type cannot precede itself");
        const std::uint64_t key =
            (static_cast<std::uint64_t>(prefix_mask) << 8) | static_cast<std::uint32_t>(type);
        auto it = detection_cache.find(key);
        if (it != detection_cache.end()) return it->second;
        double result = 0.0;
        if (mode.kind == EvalMode::Kind::Exact) {
            for (const auto& [consumed, prob] : prefix_distribution(prefix_mask))
                result += prob * expected_audit_fraction(type, consumed);
            result *= modeled_mass[static_cast<std::size_t>(type)];
            for (std::uint32_t rest = prefix_mask; rest; rest &= rest - 1)
                result *= modeled_mass[static_cast<std::size_t>(std::countr_zero(rest))];
        } else {
            const std::uint32_t relevant = prefix_mask | (1u << type);
            const std::vector<double>& sums = prefix_sums(prefix_mask);
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (pool_tail_bits[i] & relevant) continue;
                result += expected_audit_fraction(type, sums[i],
                                                  pool[i][static_cast<std::size_t>(type)]);
            }
            result /= static_cast<double>(pool.size());
        }
        detection_cache.emplace(key, result);
        return result;
    }

    double attack_detection(const Ordering& ordering, const AttackEventSpec& event) const {
        if (event.trigger_probs.empty()) return 0.0;
        std::vector<std::uint32_t> prefix_of(static_cast<std::size_t>(num_types), 0);
        std::uint32_t prefix = 0;
        for (int t : ordering) {
            prefix_of[static_cast<std::size_t>(t)] = prefix;
            prefix |= 1u << t;
        }
        double total = 0.0;
        for (const auto& [t, p] : event.trigger_probs)
            total += p * detection(prefix_of[static_cast<std::size_t>(t)], t);
        return total;
    }
};

DetectionEvaluator::DetectionEvaluator(const Scenario& scenario, ThresholdVector thresholds,
                                       const JointCountModel& model, EvalMode mode)
    : impl_(std::make_unique<Impl>()) {
    impl_->scenario = &scenario;
    impl_->thresholds = std::move(thresholds);
    impl_->model = model;
    impl_->mode = mode;
    impl_->init();
}

DetectionEvaluator::~DetectionEvaluator() = default;
DetectionEvaluator::DetectionEvaluator(DetectionEvaluator&&) noexcept = default;
DetectionEvaluator& DetectionEvaluator::operator=(DetectionEvaluator&&) noexcept = default;

double DetectionEvaluator::detection_prob_type(const Ordering& ordering, int type) const {
    if (!is_permutation_of_types(ordering, impl_->num_types))
        throw ValidationError("ordering: not a permutation of all types");
    std::uint32_t prefix = 0;
    for (int t : ordering) {
        if (t == type) break;
        prefix |= 1u << t;
    }
    return impl_->detection(prefix, type);
}

double DetectionEvaluator::detection_prob_type_after(std::uint32_t prefix_mask, int type) const {
    return impl_->detection(prefix_mask, type);
}

double DetectionEvaluator::detection_prob_attack(const Ordering& ordering,
                                                 const AttackEventSpec& event) const {
    if (!is_permutation_of_types(ordering, impl_->num_types))
        throw ValidationError("ordering: not a permutation of all types");
    return impl_->attack_detection(ordering, event);
}

double DetectionEvaluator::adversary_utility(const Ordering& ordering,
                                             const AttackEventSpec& event) const {
    const double p = detection_prob_attack(ordering, event);
    return utility_from_detection(p, event.reward, event.penalty, event.attack_cost);
}

const ThresholdVector& DetectionEvaluator::thresholds() const { return impl_->thresholds; }
const Scenario& DetectionEvaluator::scenario() const { return *impl_->scenario; }

double detection_prob_type(const Ordering& ordering, const ThresholdVector& thresholds, int type,
                           const JointCountModel& model, const Scenario& scenario, EvalMode mode) {
    DetectionEvaluator eval(scenario, thresholds, model, mode);
    return eval.detection_prob_type(ordering, type);
}

double detection_prob_attack(const Ordering& ordering, const ThresholdVector& thresholds,
                             const AttackEventSpec& event, const JointCountModel& model,
                             const Scenario& scenario, EvalMode mode) {
    DetectionEvaluator eval(scenario, thresholds, model, mode);
    return eval.detection_prob_attack(ordering, event);
}

double adversary_utility(const Ordering& ordering, const ThresholdVector& thresholds,
                         const AttackEventSpec& event, const JointCountModel& model,
                         const Scenario& scenario, EvalMode mode) {
    DetectionEvaluator eval(scenario, thresholds, model, mode);
    return eval.adversary_utility(ordering, event);
}

PolicyEvaluation policy_value(const AuditPolicy& policy, const Scenario& scenario,
                              const JointCountModel& model, EvalMode mode) {
    policy.validate(scenario.num_types());
    DetectionEvaluator eval(scenario, policy.thresholds, model, mode);
    const int num_attackers = scenario.num_attackers();
    const int num_victims = scenario.num_victims();
    std::vector<double> mixture_utility(
        static_cast<std::size_t>(num_attackers) * num_victims, 0.0);
    for (const auto& [ordering, prob] : policy.mixture) {
        if (prob == 0.0) continue;
        for (std::size_t i = 0; i < scenario.events.size(); ++i)
            mixture_utility[i] += prob * eval.adversary_utility(ordering, scenario.events[i]);
    }
    PolicyEvaluation result;
    result.attacker_values.resize(static_cast<std::size_t>(num_attackers));
    result.best_victims.resize(static_cast<std::size_t>(num_attackers));
    for (int e = 0; e < num_attackers; ++e) {
        int best_v = 0;
        double best = mixture_utility[static_cast<std::size_t>(e) * num_victims];
        for (int v = 1; v < num_victims; ++v) {
            const double u = mixture_utility[static_cast<std::size_t>(e) * num_victims + v];
            if (u > best + 1e-12) {
                best = u;
                best_v = v;
            }
        }
        result.attacker_values[static_cast<std::size_t>(e)] = best;
        result.best_victims[static_cast<std::size_t>(e)] = best_v;
        result.objective += scenario.attackers[static_cast<std::size_t>(e)].attack_probability * best;
    }
    return result;
}

}  // namespace auditgame
