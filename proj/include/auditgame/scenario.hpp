#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "auditgame/distributions.hpp"

namespace auditgame {

// Count-model parameters as they appear in scenario files: either a truncated
// Gaussian or an explicit probability table.
struct CountModelParams {
    enum class Kind { Gaussian, Table };
    Kind kind = Kind::Gaussian;
    // Gaussian
    double mean = 0.0;
    double stddev = 1.0;
    int coverage_halfwidth = 0;
    // Table
    int support_min = 1;
    std::vector<double> pmf;

    DiscreteCountDistribution build() const;
    bool operator==(const CountModelParams&) const = default;
};

struct AlertTypeSpec {
    std::string id;        // "1"-based in files; position in the list is the internal index
    std::string name;
    double audit_cost = 1.0;           // budget units per audited alert (C_t)
    CountModelParams count_model;
    std::optional<double> benefit;     // per-type adversary reward, when rewards are type-indexed

    bool operator==(const AlertTypeSpec&) const = default;
};

struct AttackerSpec {
    std::string id;
    double attack_probability = 1.0;   // p_e

    bool operator==(const AttackerSpec&) const = default;
};

struct VictimSpec {
    std::string id;
    bool is_null_victim = false;       // explicit "do not attack" option

    bool operator==(const VictimSpec&) const = default;
};

struct AttackEventSpec {
    int attacker = 0;                  // internal indices
    int victim = 0;
    // alert type index -> trigger probability; residual mass means no alert
    std::map<int, double> trigger_probs;
    double reward = 0.0;               // R, gained when undetected
    double penalty = 0.0;              // positive magnitude; payoff when caught is -penalty
    double attack_cost = 0.0;          // K

    bool operator==(const AttackEventSpec&) const = default;
};

// A complete game instance. Immutable after construction/validation; safe to
// share read-only across threads.
struct Scenario {
    std::string name;
    std::vector<AlertTypeSpec> alert_types;
    std::vector<AttackerSpec> attackers;
    std::vector<VictimSpec> victims;
    std::vector<AttackEventSpec> events;   // dense, attacker-major: events[e*|V|+v]
    double total_budget = 0.0;
    // Permitted orderings (internal type indices); empty = all permutations.
    std::vector<std::vector<int>> ordering_whitelist;

    int num_types() const { return static_cast<int>(alert_types.size()); }
    int num_attackers() const { return static_cast<int>(attackers.size()); }
    int num_victims() const { return static_cast<int>(victims.size()); }

    const AttackEventSpec& event(int attacker, int victim) const {
        return events[static_cast<std::size_t>(attacker) * num_victims() + victim];
    }

    // Throws ValidationError naming the offending field.
    void validate() const;

    // Count model for every type, in type order.
    JointCountModel count_model() const;

    bool operator==(const Scenario&) const = default;
};

// Reads and validates a scenario JSON document (see README for the schema).
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);

void save_scenario(const Scenario& scenario, const std::string& path);
std::string scenario_to_json_text(const Scenario& scenario);

// The bundled 4-type / 5-attacker / 8-victim synthetic instance.
Scenario build_syn_a();

}  // namespace auditgame
