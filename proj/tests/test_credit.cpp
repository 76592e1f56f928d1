#include <doctest.h>

#include <string>

#include "auditgame/common.hpp"
#include "auditgame/credit.hpp"

using namespace auditgame;

namespace {

// A canonical-looking row with substitutable checking/history/purpose/job codes.
std::string make_row(const std::string& checking, const std::string& history,
                     const std::string& purpose, const std::string& job,
                     const std::string& label = "1") {
    return checking + " 12 " + history + " " + purpose +
           " 2000 A61 A73 2 A93 A101 2 A121 35 A143 A152 1 " + job + " 1 A191 A201 " + label;
}

}  // namespace

TEST_CASE("parser accepts canonical rows and reports malformed ones") {
    const std::string good = make_row("A11", "A32", "A43", "A173") + "\n" +
                             make_row("A14", "A34", "A40", "A172", "2") + "\n";
    const auto records = parse_german_data_text(good);
    REQUIRE(records.size() == 2);
    CHECK(records[0].checking_status() == "A11");
    CHECK(records[1].risk_label == 2);
    CHECK(records[1].line_number == 2);

    CHECK(parse_german_data_text("").empty());

    try {
        parse_german_data_text(good + "A11 12 A32\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_german_data_text(make_row("A19", "A32", "A43", "A173")), ParseError);
    CHECK_THROWS_AS(parse_german_data_text(make_row("A11", "A32", "A43", "A999")), ParseError);
    CHECK_THROWS_AS(parse_german_data_text(make_row("A11", "A32", "A43", "A173", "3")),
                    ParseError);
    CHECK_THROWS_AS(parse_german_data("/nonexistent/german.data"), ParseError);
}

TEST_CASE("alert rules fire in order with first match winning") {
    const auto rec = [](const std::string& checking, const std::string& history,
                        const std::string& purpose, const std::string& job) {
        return parse_german_data_text(make_row(checking, history, purpose, job)).front();
    };
    // no checking account dominates everything, for any purpose
    CHECK(label_alert_type(rec("A14", "A34", "A49", "A172")) == 1);
    CHECK(label_alert_type(rec("A14", "A30", "A410", "A174")) == 1);
    // checking < 0 with a new-car or education application
    CHECK(label_alert_type(rec("A11", "A32", "A40", "A173")) == 2);
    CHECK(label_alert_type(rec("A11", "A32", "A46", "A173")) == 2);
    CHECK(!label_alert_type(rec("A11", "A32", "A43", "A173")).has_value());
    // positive balance, unskilled, education/appliances
    CHECK(label_alert_type(rec("A13", "A32", "A46", "A172")) == 3);
    CHECK(label_alert_type(rec("A13", "A32", "A44", "A171")) == 4);
    CHECK(!label_alert_type(rec("A13", "A32", "A46", "A173")).has_value());
    // positive balance, critical account, business
    CHECK(label_alert_type(rec("A13", "A34", "A49", "A173")) == 5);
    // middle checking bracket never labels
    CHECK(!label_alert_type(rec("A12", "A34", "A46", "A172")).has_value());
    // counterfactual purposes follow the same rules
    CHECK(alert_type_for(rec("A13", "A34", "A43", "A172"), "A44") == 4);
    CHECK(alert_type_for(rec("A13", "A34", "A43", "A172"), "A49") == 5);
    CHECK(!alert_type_for(rec("A13", "A30", "A43", "A173"), "A42").has_value());
}

TEST_CASE("scenario construction from the bundled synthetic file") {
    const auto records =
        parse_german_data(std::string(AUDITGAME_DATA_DIR) + "/german_synth.data");
    CHECK(records.size() == 1000);

    CreditScenarioOptions options;
    options.applicants = 100;
    options.seed = 7;
    const Scenario s = build_rea_b_scenario(records, options);
    CHECK(s.num_attackers() == 100);
    CHECK(s.num_victims() == 8);
    CHECK(s.num_types() == 5);
    CHECK(s.events.size() == 800);
    const double benefits[5] = {15, 15, 14, 20, 18};
    for (int t = 0; t < 5; ++t) CHECK(*s.alert_types[t].benefit == benefits[t]);
    for (const auto& ev : s.events) {
        for (const auto& [t, p] : ev.trigger_probs) {
            CHECK(p == 1.0);
            CHECK(ev.reward == benefits[t]);
            CHECK(ev.penalty == 20.0);
            CHECK(ev.attack_cost == 1.0);
        }
    }
    // a type-4 attack pays the type-4 benefit
    bool saw_type4 = false;
    for (const auto& ev : s.events) {
        if (ev.trigger_probs.count(3)) {
            saw_type4 = true;
            CHECK(ev.reward == 20.0);
        }
    }
    CHECK(saw_type4);

    // determinism: same seed, byte-identical scenario
    const Scenario again = build_rea_b_scenario(records, options);
    CHECK(scenario_to_json_text(again) == scenario_to_json_text(s));

    CreditScenarioOptions other = options;
    other.seed = 8;
    CHECK(build_rea_b_scenario(records, other) != s);
}

TEST_CASE("bootstrapped count models produce a valid scenario") {
    const auto records =
        parse_german_data(std::string(AUDITGAME_DATA_DIR) + "/german_synth.data");
    CreditScenarioOptions options;
    options.applicants = 50;
    options.empirical = true;
    options.bootstrap_days = 50;
    const Scenario s = build_rea_b_scenario(records, options);
    for (const auto& t : s.alert_types)
        CHECK(t.count_model.kind == CountModelParams::Kind::Table);
    CHECK_NOTHROW(s.count_model());
}

TEST_CASE("too few labeled records is an error") {
    std::string text;
    for (int i = 0; i < 30; ++i) text += make_row("A12", "A32", "A43", "A173") + "\n";
    text += make_row("A14", "A32", "A43", "A173") + "\n";
    const auto records = parse_german_data_text(text);
    CreditScenarioOptions options;
    options.applicants = 5;
    CHECK_THROWS_AS(build_rea_b_scenario(records, options), ValidationError);
}
