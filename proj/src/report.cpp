#include "tradecredit/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <utility>
#include <vector>

#include "tradecredit/errors.hpp"

namespace tradecredit {

using nlohmann::json;

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ValidationError("format", "expected text, json or csv");
}

json to_json(const IncrementalReportd& r) {
  return {{"acp_before", r.acp_before},
          {"acp_after", r.acp_after},
          {"delta_aar", r.delta_aar},
          {"delta_ebit", r.delta_ebit},
          {"delta_nopat", r.delta_nopat},
          {"delta_fcff0", r.delta_fcff0},
          {"delta_fcff_recurring", r.delta_fcff_recurring},
          {"delta_v", r.delta_v},
          {"delta_eva", r.delta_eva}};
}

namespace {

json point_json(const FrontierPointd& p) { return {{"w1", p.weight}, {"r_p", p.expected_return}, {"s_p", p.risk}}; }

}  // namespace

json to_json(const FrontierSection& f) {
  json points = json::array();
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    json p = point_json(f.points[i]);
    p["efficient"] = static_cast<bool>(f.efficient[i]);
    points.push_back(std::move(p));
  }
  return {{"groups", {f.first_group, f.second_group}},
          {"r1", f.inputs.first.expected_return},
          {"r2", f.inputs.second.expected_return},
          {"s1", f.inputs.first.risk},
          {"s2", f.inputs.second.risk},
          {"rho", f.inputs.rho},
          {"step", f.step},
          {"min_risk", point_json(f.min_risk)},
          {"points", points}};
}

json to_json(const ComparisonReport& r) {
  json j = {{"base", r.base_name},
            {"proposal", r.proposal_name},
            {"firm", to_json(r.firm)},
            {"incremental", to_json(r.incremental)},
            {"verdict", to_string(r.verdict)},
            {"warnings", r.warnings}};
  if (r.frontier) j["frontier"] = to_json(*r.frontier);
  return j;
}

json to_json(const SampleStatistics& s) {
  auto optional = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"draws", s.draws},
          {"seed", s.seed},
          {"mean", {s.mean(0), s.mean(1)}},
          {"variance", {s.variance(0), s.variance(1)}},
          {"correlation", optional(s.correlation)},
          {"mean_se", {s.mean_se(0), s.mean_se(1)}},
          {"variance_se", {s.variance_se(0), s.variance_se(1)}},
          {"correlation_se", optional(s.correlation_se)}};
}

std::string dump_machine(const json& j) { return j.dump(2) + "\n"; }

std::string format_money(double amount) {
  const double rounded = std::round(amount);
  if (rounded == 0) return "0";
  std::ostringstream digits;
  digits << std::fixed << std::setprecision(0) << std::abs(rounded);
  const std::string raw = digits.str();
  std::string grouped;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i > 0 && (raw.size() - i) % 3 == 0) grouped += ' ';
    grouped += raw[i];
  }
  return (rounded < 0 ? "-" : "") + grouped;
}

namespace {

std::string fixed(double x, int decimals) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(decimals) << x;
  return out.str();
}

std::string table(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t key_width = 0, value_width = 0;
  for (const auto& [k, v] : rows) {
    key_width = std::max(key_width, k.size());
    value_width = std::max(value_width, v.size());
  }
  std::ostringstream out;
  for (const auto& [k, v] : rows)
    out << "  " << std::left << std::setw(static_cast<int>(key_width)) << k << "  " << std::right
        << std::setw(static_cast<int>(value_width)) << v << "\n";
  return out.str();
}

}  // namespace

std::string render_frontier(const FrontierSection& f, ReportFormat format) {
  if (format == ReportFormat::Json) return dump_machine(to_json(f));
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << std::setprecision(17) << "w1,R_p,s_p,efficient\n";
    for (std::size_t i = 0; i < f.points.size(); ++i)
      out << f.points[i].weight << "," << f.points[i].expected_return << "," << f.points[i].risk << ","
          << (f.efficient[i] ? 1 : 0) << "\n";
    return out.str();
  }
  out << "Frontier " << f.first_group << "/" << f.second_group << "  (R1=" << fixed(f.inputs.first.expected_return, 4)
      << " s1=" << fixed(f.inputs.first.risk, 4) << "  R2=" << fixed(f.inputs.second.expected_return, 4)
      << " s2=" << fixed(f.inputs.second.risk, 4) << "  rho=" << fixed(f.inputs.rho, 4) << ")\n";
  out << "      w1       R_p       s_p  efficient\n";
  for (std::size_t i = 0; i < f.points.size(); ++i)
    out << std::setw(8) << fixed(f.points[i].weight, 4) << std::setw(10) << fixed(f.points[i].expected_return, 6)
        << std::setw(10) << fixed(f.points[i].risk, 6) << "  " << (f.efficient[i] ? "*" : "") << "\n";
  out << "minimum risk at w1=" << fixed(f.min_risk.weight, 4) << ": R_p=" << fixed(f.min_risk.expected_return, 6)
      << " s_p=" << fixed(f.min_risk.risk, 6) << "\n";
  return out.str();
}

std::string render_report(const ComparisonReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) return dump_machine(to_json(r));
  const auto& d = r.incremental;
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << std::setprecision(17) << "metric,value\n";
    const json metrics = to_json(d);
    for (const auto& [key, value] : metrics.items()) out << key << "," << value.get<double>() << "\n";
    out << "verdict," << to_string(r.verdict) << "\n";
    return out.str();
  }
  std::ostringstream out;
  out << "Trade credit policy change: " << r.base_name << " -> " << r.proposal_name << "\n";
  out << "(WACC " << fixed(r.firm.wacc * 100, 2) << "%, k_AAR " << fixed(r.firm.receivables_opex_rate * 100, 2)
      << "%, tax " << fixed(r.firm.tax_rate * 100, 2) << "%, horizon "
      << (r.firm.horizon.perpetuity ? std::string("perpetual") : std::to_string(r.firm.horizon.years) + " years")
      << ")\n\n";
  out << table({{"ACP before (days)", fixed(d.acp_before, 2)},
                {"ACP after (days)", fixed(d.acp_after, 2)},
                {"dAAR", format_money(d.delta_aar)},
                {"dEBIT / year", format_money(d.delta_ebit)},
                {"dNOPAT / year", format_money(d.delta_nopat)},
                {"dFCFF at t=0", format_money(d.delta_fcff0)},
                {"dFCFF recurring", format_money(d.delta_fcff_recurring)},
                {"dV", format_money(d.delta_v)},
                {"dEVA / year", format_money(d.delta_eva)}});
  out << "\nVerdict: " << to_string(r.verdict) << "\n";
  if (!r.warnings.empty()) out << r.warnings.size() << " warning(s)\n";
  if (r.frontier) {
    const auto& f = *r.frontier;
    out << "\nReceivables portfolio " << f.first_group << "/" << f.second_group << ": rho=" << fixed(f.inputs.rho, 4)
        << ", minimum risk at w1=" << fixed(f.min_risk.weight, 4) << " (R_p=" << fixed(f.min_risk.expected_return, 6)
        << ", s_p=" << fixed(f.min_risk.risk, 6) << ")\n";
  }
  return out.str();
}

std::string render_simulation(const SampleStatistics& s, ReportFormat format) {
  if (format == ReportFormat::Json) return dump_machine(to_json(s));
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << std::setprecision(17) << "statistic,value,standard_error\n";
    out << "mean1," << s.mean(0) << "," << s.mean_se(0) << "\n";
    out << "mean2," << s.mean(1) << "," << s.mean_se(1) << "\n";
    out << "variance1," << s.variance(0) << "," << s.variance_se(0) << "\n";
    out << "variance2," << s.variance(1) << "," << s.variance_se(1) << "\n";
    if (s.correlation) out << "correlation," << *s.correlation << "," << *s.correlation_se << "\n";
    return out.str();
  }
  out << "Monte Carlo: " << s.draws << " draws, seed " << s.seed << "\n";
  out << table({{"mean 1", fixed(s.mean(0), 6) + " +/- " + fixed(s.mean_se(0), 6)},
                {"mean 2", fixed(s.mean(1), 6) + " +/- " + fixed(s.mean_se(1), 6)},
                {"variance 1", fixed(s.variance(0), 6) + " +/- " + fixed(s.variance_se(0), 6)},
                {"variance 2", fixed(s.variance(1), 6) + " +/- " + fixed(s.variance_se(1), 6)},
                {"correlation", s.correlation ? fixed(*s.correlation, 6) + " +/- " + fixed(*s.correlation_se, 6)
                                              : std::string("undefined")}});
  return out.str();
}

}  // namespace tradecredit
