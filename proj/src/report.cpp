#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmpd/bench.hpp"

namespace rmpd {

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "markdown" || name == "md") return ReportFormat::markdown;
    throw std::invalid_argument("unknown report format '" + std::string(name) + "' (csv, markdown)");
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fixed(*v, 2) : "n/a"; }

std::vector<std::vector<std::string>> rows(const BenchmarkReport& report, ReportTable table) {
    std::vector<std::vector<std::string>> out;
    out.push_back({"planner", "Time", "Length", "q_smt", "#CC", "SR(%)"});
    for (const PlannerSummary& s : report.planners) {
        const std::string sr = fixed(s.success_rate, 1);
        if (table == ReportTable::normalized) {
            out.push_back({s.planner, cell(s.norm_time), cell(s.norm_length), cell(s.norm_q_smt),
                           cell(s.norm_collision_checks), sr});
        } else if (s.successes == 0) {
            out.push_back({s.planner, "n/a", "n/a", "n/a", "n/a", sr});
        } else {
            out.push_back({s.planner, fixed(s.mean_time_s, 6), fixed(s.mean_length, 3), fixed(s.mean_q_smt, 3),
                           fixed(s.mean_collision_checks, 1), sr});
        }
    }
    return out;
}

std::string csv(const std::vector<std::vector<std::string>>& table) {
    std::string out;
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

std::string markdown(const std::vector<std::vector<std::string>>& table) {
    std::string out;
    for (std::size_t r = 0; r < table.size(); ++r) {
        out += "|";
        for (const auto& c : table[r]) out += " " + c + " |";
        out += "\n";
        if (r == 0) {
            out += "|";
            for (std::size_t i = 0; i < table[r].size(); ++i) out += i == 0 ? "---|" : "---:|";
            out += "\n";
        }
    }
    return out;
}

}  // namespace

std::string emit_report(const BenchmarkReport& report, ReportFormat format, ReportTable table) {
    if (report.planners.empty()) throw std::invalid_argument("emit_report: empty report");
    if (format == ReportFormat::csv) return csv(rows(report, table));
    std::string out = "# " + report.name + "\n\n";
    out += "Normalized by the best planner per column (SR is absolute).\n\n";
    out += markdown(rows(report, ReportTable::normalized));
    out += "\nMeans over successful trials (Time in seconds).\n\n";
    out += markdown(rows(report, ReportTable::raw));
    out += "\nMedian planning time over all trials:\n\n";
    for (const PlannerSummary& s : report.planners) {
        out += "- " + s.planner + ": " + fixed(s.median_time_s, 6) + " s\n";
    }
    if (report.sdf_build_s > 0.0) out += "\nSigned distance field build: " + fixed(report.sdf_build_s, 6) + " s\n";
    return out;
}

}  // namespace rmpd
