#include "auditgame/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "auditgame/common.hpp"

namespace auditgame {

using nlohmann::json;

DiscreteCountDistribution CountModelParams::build() const {
    if (kind == Kind::Gaussian) return discretize_gaussian(mean, stddev, coverage_halfwidth);
    return DiscreteCountDistribution(support_min, pmf);
}

void Scenario::validate() const {
    if (alert_types.empty()) throw ValidationError("alert_types: at least one type required");
    if (attackers.empty()) throw ValidationError("attackers: at least one attacker required");
    if (victims.empty()) throw ValidationError("victims: at least one victim required");
    if (!(total_budget >= 0.0)) throw ValidationError("total_budget: must be >= 0");

    for (const auto& t : alert_types) {
        if (!(t.audit_cost > 0.0))
            throw ValidationError("alert_types[" + t.id + "].audit_cost: must be > 0");
        t.count_model.build();  // throws with its own message on bad parameters
    }
    for (const auto& a : attackers) {
        if (!(a.attack_probability >= 0.0 && a.attack_probability <= 1.0))
            throw ValidationError("attackers[" + a.id + "].attack_probability: must be in [0,1]");
    }
    int null_count = 0;
    for (const auto& v : victims) null_count += v.is_null_victim ? 1 : 0;
    if (null_count > 1) throw ValidationError("victims: at most one null victim allowed");

    if (events.size() != static_cast<std::size_t>(num_attackers()) * num_victims())
        throw ValidationError("events: table must have one entry per (attacker, victim) pair");
    std::vector<char> seen(events.size(), 0);
    for (const auto& ev : events) {
        if (ev.attacker < 0 || ev.attacker >= num_attackers())
            throw ValidationError("events[].attacker: index out of range");
        if (ev.victim < 0 || ev.victim >= num_victims())
            throw ValidationError("events[].victim: index out of range");
        const std::string where =
            "events[" + attackers[ev.attacker].id + "," + victims[ev.victim].id + "]";
        auto& cell = seen[static_cast<std::size_t>(ev.attacker) * num_victims() + ev.victim];
        if (cell) throw ValidationError(where + ": duplicate event entry");
        cell = 1;
        double total = 0.0;
        for (const auto& [type, prob] : ev.trigger_probs) {
            if (type < 0 || type >= num_types())
                throw ValidationError(where + ".trigger_probs: unknown alert type");
            if (!(prob >= 0.0 && prob <= 1.0))
                throw ValidationError(where + ".trigger_probs: probability must be in [0,1]");
            total += prob;
        }
        if (total > 1.0 + 1e-9)
            throw ValidationError(where + ".trigger_probs: sum " + std::to_string(total) +
                                  " exceeds 1");
        if (!(ev.attack_cost >= 0.0))
            throw ValidationError(where + ".attack_cost: must be >= 0");
        if (victims[ev.victim].is_null_victim) {
            if (ev.reward != 0.0 || ev.penalty != 0.0 || ev.attack_cost != 0.0 ||
                !ev.trigger_probs.empty())
                throw ValidationError(where + ": null victim requires reward = penalty = "
                                              "attack_cost = 0 and no triggers");
        }
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
        const int e = events[i].attacker, v = events[i].victim;
        if (events[i] != event(e, v))
            throw ValidationError("events: table must be dense in attacker-major order");
    }

    for (const auto& o : ordering_whitelist) {
        std::vector<char> used(static_cast<std::size_t>(num_types()), 0);
        if (o.size() != static_cast<std::size_t>(num_types()))
            throw ValidationError("ordering_whitelist: entry has wrong length");
        for (int t : o) {
            if (t < 0 || t >= num_types() || used[static_cast<std::size_t>(t)])
                throw ValidationError("ordering_whitelist: entry is not a permutation of types");
            used[static_cast<std::size_t>(t)] = 1;
        }
    }
}

JointCountModel Scenario::count_model() const {
    JointCountModel model;
    model.per_type.reserve(alert_types.size());
    for (const auto& t : alert_types) model.per_type.push_back(t.count_model.build());
    return model;
}

namespace {

json count_model_to_json(const CountModelParams& p) {
    json j;
    if (p.kind == CountModelParams::Kind::Gaussian) {
        j["kind"] = "gaussian";
        j["mean"] = p.mean;
        j["std"] = p.stddev;
        j["coverage_halfwidth"] = p.coverage_halfwidth;
    } else {
        j["kind"] = "table";
        j["support_min"] = p.support_min;
        j["pmf"] = p.pmf;
    }
    return j;
}

CountModelParams count_model_from_json(const json& j, const std::string& where) {
    CountModelParams p;
    const std::string kind = j.value("kind", "gaussian");
    if (kind == "gaussian") {
        p.kind = CountModelParams::Kind::Gaussian;
        if (!j.contains("mean") || !j.contains("std"))
            throw ValidationError(where + ".count_model: gaussian requires mean and std");
        p.mean = j.at("mean").get<double>();
        p.stddev = j.at("std").get<double>();
        p.coverage_halfwidth = j.value("coverage_halfwidth", 0);
    } else if (kind == "table") {
        p.kind = CountModelParams::Kind::Table;
        p.support_min = j.value("support_min", 1);
        p.pmf = j.at("pmf").get<std::vector<double>>();
    } else {
        throw ValidationError(where + ".count_model.kind: unknown kind '" + kind + "'");
    }
    return p;
}

int index_of(const std::vector<std::string>& ids, const std::string& id,
             const std::string& field) {
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw ValidationError(field + ": unknown id '" + id + "'");
    return static_cast<int>(it - ids.begin());
}

}  // namespace

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["alert_types"] = json::array();
    for (const auto& t : s.alert_types) {
        json jt;
        jt["id"] = t.id;
        jt["name"] = t.name;
        jt["audit_cost"] = t.audit_cost;
        jt["count_model"] = count_model_to_json(t.count_model);
        if (t.benefit) jt["benefit"] = *t.benefit;
        j["alert_types"].push_back(jt);
    }
    j["attackers"] = json::array();
    for (const auto& a : s.attackers)
        j["attackers"].push_back({{"id", a.id}, {"attack_probability", a.attack_probability}});
    j["victims"] = json::array();
    for (const auto& v : s.victims)
        j["victims"].push_back({{"id", v.id}, {"is_null_victim", v.is_null_victim}});
    j["events"] = json::array();
    for (const auto& ev : s.events) {
        json je;
        je["attacker"] = s.attackers[ev.attacker].id;
        je["victim"] = s.victims[ev.victim].id;
        json triggers = json::object();
        for (const auto& [type, prob] : ev.trigger_probs)
            triggers[s.alert_types[type].id] = prob;
        je["trigger_probs"] = triggers;
        je["reward"] = ev.reward;
        je["penalty"] = ev.penalty;   // stored as a positive magnitude
        je["attack_cost"] = ev.attack_cost;
        j["events"].push_back(je);
    }
    j["total_budget"] = s.total_budget;
    if (!s.ordering_whitelist.empty()) {
        json wl = json::array();
        for (const auto& o : s.ordering_whitelist) {
            json jo = json::array();
            for (int t : o) jo.push_back(s.alert_types[t].id);
            wl.push_back(jo);
        }
        j["ordering_whitelist"] = wl;
    }
    return j.dump(2) + "\n";
}

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
    }
    Scenario s;
    try {
        s.name = j.value("name", "");
        std::vector<std::string> type_ids, attacker_ids, victim_ids;
        for (const auto& jt : j.at("alert_types")) {
            AlertTypeSpec t;
            t.id = jt.at("id").get<std::string>();
            t.name = jt.value("name", t.id);
            t.audit_cost = jt.at("audit_cost").get<double>();
            t.count_model = count_model_from_json(jt.at("count_model"), "alert_types[" + t.id + "]");
            if (jt.contains("benefit")) t.benefit = jt.at("benefit").get<double>();
            if (std::find(type_ids.begin(), type_ids.end(), t.id) != type_ids.end())
                throw ValidationError("alert_types: duplicate id '" + t.id + "'");
            type_ids.push_back(t.id);
            s.alert_types.push_back(std::move(t));
        }
        for (const auto& ja : j.at("attackers")) {
            AttackerSpec a;
            a.id = ja.at("id").get<std::string>();
            a.attack_probability = ja.at("attack_probability").get<double>();
            attacker_ids.push_back(a.id);
            s.attackers.push_back(std::move(a));
        }
        for (const auto& jv : j.at("victims")) {
            VictimSpec v;
            v.id = jv.at("id").get<std::string>();
            v.is_null_victim = jv.value("is_null_victim", false);
            victim_ids.push_back(v.id);
            s.victims.push_back(std::move(v));
        }
        std::vector<AttackEventSpec> parsed;
        for (const auto& je : j.at("events")) {
            AttackEventSpec ev;
            const std::string a_id = je.at("attacker").get<std::string>();
            const std::string v_id = je.at("victim").get<std::string>();
            ev.attacker = index_of(attacker_ids, a_id, "events[].attacker");
            ev.victim = index_of(victim_ids, v_id, "events[].victim");
            if (je.contains("trigger_probs")) {
                for (const auto& [key, val] : je.at("trigger_probs").items()) {
                    const int t = index_of(type_ids, key,
                                           "events[" + a_id + "," + v_id + "].trigger_probs");
                    ev.trigger_probs[t] = val.get<double>();
                }
            }
            ev.reward = je.value("reward", 0.0);
            ev.penalty = je.value("penalty", 0.0);
            ev.attack_cost = je.value("attack_cost", 0.0);
            parsed.push_back(std::move(ev));
        }
        // Accept events in any order in the file; store attacker-major.
        s.events.resize(static_cast<std::size_t>(s.num_attackers()) * s.num_victims());
        std::vector<char> filled(s.events.size(), 0);
        for (auto& ev : parsed) {
            const std::size_t slot =
                static_cast<std::size_t>(ev.attacker) * s.num_victims() + ev.victim;
            if (filled[slot])
                throw ValidationError("events[" + attacker_ids[ev.attacker] + "," +
                                      victim_ids[ev.victim] + "]: duplicate event entry");
            filled[slot] = 1;
            s.events[slot] = std::move(ev);
        }
        for (std::size_t i = 0; i < filled.size(); ++i) {
            if (!filled[i])
                throw ValidationError(
                    "events[" + attacker_ids[i / s.num_victims()] + "," +
                    victim_ids[i % s.num_victims()] + "]: missing event entry");
            s.events[i].attacker = static_cast<int>(i) / s.num_victims();
            s.events[i].victim = static_cast<int>(i) % s.num_victims();
        }
        s.total_budget = j.at("total_budget").get<double>();
        if (j.contains("ordering_whitelist")) {
            for (const auto& jo : j.at("ordering_whitelist")) {
                std::vector<int> o;
                for (const auto& id : jo)
                    o.push_back(index_of(type_ids, id.get<std::string>(), "ordering_whitelist"));
                s.ordering_whitelist.push_back(std::move(o));
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("scenario: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("scenario: cannot write file '" + path + "'");
    out << scenario_to_json_text(scenario);
}

Scenario build_syn_a() {
    Scenario s;
    s.name = "syn_a";
    const double means[4] = {6, 5, 4, 4};
    const double stds[4] = {2, 1.6, 1.3, 1};
    const int halfwidths[4] = {5, 4, 3, 3};
    const double benefits[4] = {3.4, 3.7, 4.0, 4.3};
    for (int t = 0; t < 4; ++t) {
        AlertTypeSpec spec;
        spec.id = std::to_string(t + 1);
        spec.name = "type" + std::to_string(t + 1);
        spec.audit_cost = 1.0;
        spec.count_model.kind = CountModelParams::Kind::Gaussian;
        spec.count_model.mean = means[t];
        spec.count_model.stddev = stds[t];
        spec.count_model.coverage_halfwidth = halfwidths[t];
        spec.benefit = benefits[t];
        s.alert_types.push_back(std::move(spec));
    }
    for (int e = 0; e < 5; ++e) s.attackers.push_back({"e" + std::to_string(e + 1), 1.0});
    for (int v = 0; v < 8; ++v) s.victims.push_back({"r" + std::to_string(v + 1), false});

    // Deterministic event -> alert type map; 0 marks a benign access.
    const int type_map[5][8] = {
        {0, 3, 2, 2, 3, 4, 3, 1},
        {1, 0, 1, 1, 1, 2, 1, 1},
        {1, 3, 4, 0, 1, 3, 1, 4},
        {2, 1, 3, 1, 4, 4, 2, 2},
        {2, 3, 1, 4, 2, 1, 3, 2},
    };
    // Benign cells carry no reward, penalty, or attack cost: attacking an
    // alert-free target is equivalent to not attacking.
    for (int e = 0; e < 5; ++e) {
        for (int v = 0; v < 8; ++v) {
            AttackEventSpec ev;
            ev.attacker = e;
            ev.victim = v;
            const int t = type_map[e][v];
            if (t > 0) {
                ev.trigger_probs[t - 1] = 1.0;
                ev.reward = benefits[t - 1];
                ev.penalty = 4.0;
                ev.attack_cost = 0.4;
            }
            s.events.push_back(std::move(ev));
        }
    }
    s.total_budget = 2.0;
    s.validate();
    return s;
}

}  // namespace auditgame
