#pragma once

#include <optional>
#include <string>
#include <vector>

namespace auditgame {

// One sweep cell. Optional fields print as empty CSV cells.
struct ReportRow {
    std::string scenario_id;
    double budget = 0.0;
    std::string method;
    std::optional<double> epsilon;
    std::string status = "ok";  // "error" marks a failed cell; message holds why
    std::optional<double> objective;
    std::vector<double> thresholds;
    std::optional<int> mixture_support;
    std::optional<long long> explored_count;
    std::optional<double> gamma_vs_bruteforce;
    std::optional<double> wall_ms;
    std::string message;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;

    // RFC 4180, one fixed header row.
    std::string to_csv() const;
    void write_csv(const std::string& path) const;
};

// Trimmed decimal formatting shared by CSV and JSON output (deterministic).
std::string format_number(double value);

}  // namespace auditgame
