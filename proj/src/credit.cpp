#include "auditgame/credit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "auditgame/common.hpp"
#include "auditgame/rng.hpp"

namespace auditgame {

namespace {

const std::vector<std::string> kCheckingCodes = {"A11", "A12", "A13", "A14"};
const std::vector<std::string> kHistoryCodes = {"A30", "A31", "A32", "A33", "A34"};
const std::vector<std::string> kPurposeCodes = {"A40", "A41", "A42", "A43", "A44",
                                                "A45", "A46", "A47", "A48", "A49", "A410"};
const std::vector<std::string> kJobCodes = {"A171", "A172", "A173", "A174"};

void require_code(const std::string& value, const std::vector<std::string>& codes,
                  const char* field, int line) {
    if (std::find(codes.begin(), codes.end(), value) == codes.end())
        throw ParseError("german data line " + std::to_string(line) + ": unknown " + field +
                         " code '" + value + "'");
}

bool is_unskilled(const std::string& job) { return job == "A171" || job == "A172"; }

// Count-model parameters per alert type.
constexpr double kCountMean[5] = {370.04, 82.42, 5.13, 28.21, 8.31};
constexpr double kCountStd[5] = {15.81, 7.87, 2.08, 5.25, 2.96};
constexpr double kBenefit[5] = {15, 15, 14, 20, 18};
constexpr double kPenalty = 20.0;

}  // namespace

std::vector<CreditRecord> parse_german_data_text(const std::string& text) {
    std::vector<CreditRecord> records;
    std::istringstream in(text);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        std::string token;
        while (fields >> token) tokens.push_back(token);
        if (tokens.empty()) continue;
        if (tokens.size() != 21)
            throw ParseError("german data line " + std::to_string(line_number) + ": expected 21 "
                             "fields, got " + std::to_string(tokens.size()));
        CreditRecord rec;
        rec.line_number = line_number;
        for (std::size_t i = 0; i < 20; ++i) rec.attributes[i] = tokens[i];
        require_code(rec.checking_status(), kCheckingCodes, "checking-status", line_number);
        require_code(rec.credit_history(), kHistoryCodes, "credit-history", line_number);
        require_code(rec.purpose(), kPurposeCodes, "purpose", line_number);
        require_code(rec.job(), kJobCodes, "job", line_number);
        try {
            rec.risk_label = std::stoi(tokens[20]);
        } catch (const std::exception&) {
            rec.risk_label = 0;
        }
        if (rec.risk_label != 1 && rec.risk_label != 2)
            throw ParseError("german data line " + std::to_string(line_number) +
                             ": risk label must be 1 or 2");
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<CreditRecord> parse_german_data(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("german data: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_german_data_text(buf.str());
}

const std::vector<std::string>& credit_purposes() {
    static const std::vector<std::string> purposes = {"A40", "A41", "A42", "A43",
                                                      "A44", "A45", "A46", "A49"};
    return purposes;
}

bool AlertRule::matches(const CreditRecord& record, const std::string& purpose) const {
    if (record.checking_status() != checking_status) return false;
    if (require_unskilled && !is_unskilled(record.job())) return false;
    if (require_critical && record.credit_history() != "A34") return false;
    if (purposes.empty()) return true;
    return std::find(purposes.begin(), purposes.end(), purpose) != purposes.end();
}

const std::vector<AlertRule>& credit_alert_rules() {
    static const std::vector<AlertRule> rules = {
        {1, "A14", false, false, {}},
        {2, "A11", false, false, {"A40", "A46"}},
        {3, "A13", true, false, {"A46"}},
        {4, "A13", true, false, {"A44"}},
        {5, "A13", false, true, {"A49"}},
    };
    return rules;
}

std::optional<int> alert_type_for(const CreditRecord& record, const std::string& purpose) {
    for (const auto& rule : credit_alert_rules())
        if (rule.matches(record, purpose)) return rule.id;
    return std::nullopt;
}

std::optional<int> label_alert_type(const CreditRecord& record) {
    return alert_type_for(record, record.purpose());
}

Scenario build_rea_b_scenario(const std::vector<CreditRecord>& records,
                              const CreditScenarioOptions& options) {
    std::vector<const CreditRecord*> labeled;
    for (const auto& rec : records)
        if (label_alert_type(rec)) labeled.push_back(&rec);
    if (static_cast<int>(labeled.size()) < options.applicants)
        throw ValidationError("build_rea_b_scenario: only " + std::to_string(labeled.size()) +
                              " labeled records for " + std::to_string(options.applicants) +
                              " requested applicants");

    Rng rng(options.seed);
    for (int i = 0; i < options.applicants; ++i) {
        const long long j = rng.next_int(i, static_cast<long long>(labeled.size()) - 1);
        std::swap(labeled[static_cast<std::size_t>(i)], labeled[static_cast<std::size_t>(j)]);
    }
    labeled.resize(static_cast<std::size_t>(options.applicants));

    Scenario s;
    s.name = "rea_b";
    for (int t = 0; t < 5; ++t) {
        AlertTypeSpec spec;
        spec.id = std::to_string(t + 1);
        spec.name = "credit_alert_" + std::to_string(t + 1);
        spec.audit_cost = 1.0;
        spec.benefit = kBenefit[t];
        if (options.empirical) {
            // Bootstrap: resample the labeled records per simulated day and
            // count how many would raise this alert type.
            std::vector<int> counts;
            Rng boot = Rng::derive(options.seed, 1000 + static_cast<std::uint64_t>(t));
            counts.reserve(static_cast<std::size_t>(options.bootstrap_days));
            for (int day = 0; day < options.bootstrap_days; ++day) {
                int n = 0;
                for (std::size_t i = 0; i < labeled.size(); ++i) {
                    const auto& rec =
                        *labeled[static_cast<std::size_t>(boot.next_int(0,
                            static_cast<long long>(labeled.size()) - 1))];
                    n += label_alert_type(rec) == t + 1 ? 1 : 0;
                }
                counts.push_back(n);
            }
            const DiscreteCountDistribution dist = empirical_distribution(counts);
            spec.count_model.kind = CountModelParams::Kind::Table;
            spec.count_model.support_min = dist.support_min();
            spec.count_model.pmf = dist.pmf_table();
        } else {
            spec.count_model.kind = CountModelParams::Kind::Gaussian;
            spec.count_model.mean = kCountMean[t];
            spec.count_model.stddev = kCountStd[t];
            spec.count_model.coverage_halfwidth =
                static_cast<int>(std::ceil(3.0 * kCountStd[t]));
        }
        s.alert_types.push_back(std::move(spec));
    }
    for (int e = 0; e < options.applicants; ++e)
        s.attackers.push_back({"a" + std::to_string(e + 1), 1.0});
    for (const auto& purpose : credit_purposes()) s.victims.push_back({purpose, false});

    for (int e = 0; e < options.applicants; ++e) {
        for (int v = 0; v < static_cast<int>(credit_purposes().size()); ++v) {
            AttackEventSpec ev;
            ev.attacker = e;
            ev.victim = v;
            ev.penalty = kPenalty;
            ev.attack_cost = 1.0;
            const auto type = alert_type_for(*labeled[static_cast<std::size_t>(e)],
                                             credit_purposes()[static_cast<std::size_t>(v)]);
            if (type) {
                ev.trigger_probs[*type - 1] = 1.0;
                ev.reward = kBenefit[*type - 1];
            }
            s.events.push_back(std::move(ev));
        }
    }
    s.total_budget = 10.0;
    s.validate();
    return s;
}

}  // namespace auditgame
