#pragma once

#include <string>

#include "scene/eval/metrics.hpp"

namespace scene::eval {

enum class ReportFormat { Text, Csv, Json };

ReportFormat report_format_from_string(const std::string& text);

/// Two-decimal percentage string, round-half-up (so 97.995 -> "98.00").
std::string format_pct(double value);

/// Renders a report. Text is a fixed-width per-class table; CSV has header
/// `class,precision,recall,f1`; JSON carries full-precision values and
/// parses back losslessly via report_from_json.
std::string render_report(const MetricReport& report, ReportFormat format);

MetricReport report_from_json(const std::string& text);

}  // namespace scene::eval
