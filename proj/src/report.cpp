#include "auditgame/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "auditgame/common.hpp"

namespace auditgame {

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    std::string s(buf);
    const auto dot = s.find('.');
    std::size_t last = s.find_last_not_of('0');
    if (last == dot) --last;
    s.erase(last + 1);
    if (s == "-0") s = "0";
    return s;
}

namespace {

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

std::string thresholds_text(const std::vector<double>& b) {
    std::string out = "[";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) out += ",";
        out += format_number(b[i]);
    }
    return out + "]";
}

}  // namespace

std::string ExperimentReport::to_csv() const {
    std::string out =
        "scenario,budget,method,epsilon,status,objective,thresholds,"
        "mixture_support,explored,gamma_vs_bruteforce,wall_ms,message\n";
    for (const auto& row : rows) {
        out += csv_quote(row.scenario_id);
        out += ",";
        out += format_number(row.budget);
        out += ",";
        out += csv_quote(row.method);
        out += ",";
        if (row.epsilon) out += format_number(*row.epsilon);
        out += ",";
        out += row.status;
        out += ",";
        if (row.objective) out += format_number(*row.objective);
        out += ",";
        out += csv_quote(row.thresholds.empty() ? "" : thresholds_text(row.thresholds));
        out += ",";
        if (row.mixture_support) out += std::to_string(*row.mixture_support);
        out += ",";
        if (row.explored_count) out += std::to_string(*row.explored_count);
        out += ",";
        if (row.gamma_vs_bruteforce) out += format_number(*row.gamma_vs_bruteforce);
        out += ",";
        if (row.wall_ms) out += format_number(*row.wall_ms);
        out += ",";
        out += csv_quote(row.message);
        out += "\n";
    }
    return out;
}

void ExperimentReport::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("report: cannot write file '" + path + "'");
    out << to_csv();
}

}  // namespace auditgame
