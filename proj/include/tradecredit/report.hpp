#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "tradecredit/scenario.hpp"
#include "tradecredit/simulation.hpp"

namespace tradecredit {

enum class ReportFormat { Text, Json, Csv };

/// Parses "text", "json" or "csv"; throws ValidationError otherwise.
ReportFormat parse_report_format(std::string_view name);

nlohmann::json to_json(const IncrementalReportd& report);
nlohmann::json to_json(const FrontierSection& frontier);
nlohmann::json to_json(const ComparisonReport& report);
nlohmann::json to_json(const SampleStatistics& stats);

/// Machine format shared by the CLI and the HTTP service: two-space indented
/// JSON with full double precision.
std::string dump_machine(const nlohmann::json& j);

/// Text renders an aligned table with amounts rounded to whole euros; Json
/// is dump_machine(to_json(report)); Csv is one metric,value row per field.
std::string render_report(const ComparisonReport& report, ReportFormat format);

/// Text is an aligned table, Csv has the columns w1,R_p,s_p,efficient.
std::string render_frontier(const FrontierSection& frontier, ReportFormat format);

std::string render_simulation(const SampleStatistics& stats, ReportFormat format);

/// Whole-euro amount with space-separated thousands, e.g. "-11 892 361".
std::string format_money(double amount);

}  // namespace tradecredit
