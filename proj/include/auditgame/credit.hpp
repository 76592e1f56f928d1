#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "auditgame/scenario.hpp"

namespace auditgame {

// One row of the Statlog German-credit file: 20 attributes plus the risk label.
struct CreditRecord {
    std::array<std::string, 20> attributes;
    int risk_label = 1;  // 1 = good, 2 = bad
    int line_number = 0;

    const std::string& checking_status() const { return attributes[0]; }   // A11..A14
    const std::string& credit_history() const { return attributes[2]; }    // A30..A34
    const std::string& purpose() const { return attributes[3]; }           // A40..A410
    const std::string& job() const { return attributes[16]; }              // A171..A174
};

// Space-separated rows, 21 columns each. Throws ParseError naming the line on
// arity mismatches or unknown codes in the fields the alert rules read.
std::vector<CreditRecord> parse_german_data(const std::string& path);
std::vector<CreditRecord> parse_german_data_text(const std::string& text);

// The eight application purposes acting as victims, in victim order.
const std::vector<std::string>& credit_purposes();

// One alert rule: attribute predicate plus applicable purposes. Rules are
// mutually exclusive by evaluation order (first match wins).
struct AlertRule {
    int id;                              // 1-based alert type
    std::string checking_status;         // required checking-account code
    bool require_unskilled = false;      // job in {A171, A172}
    bool require_critical = false;       // credit history A34
    std::vector<std::string> purposes;   // empty = any purpose

    bool matches(const CreditRecord& record, const std::string& purpose) const;
};

// The five rules in evaluation order:
//   1: no checking account (A14), any purpose
//   2: checking < 0 (A11), purpose in {new car A40, education A46}
//   3: checking > 0 (A13), unskilled job, education A46
//   4: checking > 0 (A13), unskilled job, appliances A44
//   5: checking > 0 (A13), critical account, business A49
const std::vector<AlertRule>& credit_alert_rules();

// First matching rule for a (record, purpose) pair, or nullopt for no alert.
std::optional<int> alert_type_for(const CreditRecord& record, const std::string& purpose);

// Labels a record with its own application purpose.
std::optional<int> label_alert_type(const CreditRecord& record);

struct CreditScenarioOptions {
    int applicants = 100;
    std::uint64_t seed = 42;
    // Replace the fixed Gaussian count models with bootstrap estimates from
    // the labeled records (resampled label counts over `bootstrap_days` days).
    bool empirical = false;
    int bootstrap_days = 365;
};

// Builds the credit-audit scenario: sampled labeled applicants as attackers
// (p_e = 1), the eight purposes as victims, five alert types with fixed count
// models, rewards [15,15,14,20,18], penalty 20, unit attack and audit costs.
Scenario build_rea_b_scenario(const std::vector<CreditRecord>& records,
                              const CreditScenarioOptions& options = {});

}  // namespace auditgame
