#include "scene/eval/report.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace scene::eval {

using nlohmann::json;

ReportFormat report_format_from_string(const std::string& text) {
  if (text == "text") return ReportFormat::Text;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw std::runtime_error("unknown report format: '" + text + "'");
}

std::string format_pct(double value) {
  const bool neg = value < 0.0;
  const long long cents = static_cast<long long>(std::floor(std::abs(value) * 100.0 + 0.5));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", neg && cents != 0 ? "-" : "",
                cents / 100, cents % 100);
  return buf;
}

namespace {

std::string render_text(const MetricReport& r) {
  std::ostringstream os;
  char line[160];
  if (r.baseline) {
    os << "Activity          Precision    Recall        F1  Baseline     Delta\n";
    for (int c = 0; c < data::kNumClasses; ++c) {
      std::snprintf(line, sizeof(line), "%-16s %10s %9s %9s %9s %9s\n",
                    std::string(data::class_names()[c]).c_str(),
                    format_pct(r.precision[c]).c_str(), format_pct(r.recall[c]).c_str(),
                    format_pct(r.f1[c]).c_str(), format_pct(baseline_f1()[c]).c_str(),
                    format_pct(r.baseline->f1_delta[c]).c_str());
      os << line;
    }
    std::snprintf(line, sizeof(line), "%-16s %30s %9s %9s\n", "Macro F1",
                  format_pct(r.macro_f1).c_str(), format_pct(baseline_macro_f1()).c_str(),
                  format_pct(r.baseline->macro_f1_delta).c_str());
    os << line;
  } else {
    os << "Activity          Precision    Recall        F1\n";
    for (int c = 0; c < data::kNumClasses; ++c) {
      std::snprintf(line, sizeof(line), "%-16s %10s %9s %9s\n",
                    std::string(data::class_names()[c]).c_str(),
                    format_pct(r.precision[c]).c_str(), format_pct(r.recall[c]).c_str(),
                    format_pct(r.f1[c]).c_str());
      os << line;
    }
    std::snprintf(line, sizeof(line), "%-16s %30s\n", "Macro F1",
                  format_pct(r.macro_f1).c_str());
    os << line;
  }
  os << "Macro accuracy (" << r.macro_accuracy_definition
     << "): " << format_pct(r.macro_accuracy) << "\n";
  return os.str();
}

std::string render_csv(const MetricReport& r) {
  std::ostringstream os;
  os << "class,precision,recall,f1\n";
  for (int c = 0; c < data::kNumClasses; ++c) {
    os << data::class_names()[c] << "," << format_pct(r.precision[c]) << ","
       << format_pct(r.recall[c]) << "," << format_pct(r.f1[c]) << "\n";
  }
  os << "macro,," << format_pct(r.macro_accuracy) << "," << format_pct(r.macro_f1) << "\n";
  return os.str();
}

json to_json(const MetricReport& r) {
  json j;
  j["classes"] = json::array();
  for (int c = 0; c < data::kNumClasses; ++c) {
    j["classes"].push_back({{"name", std::string(data::class_names()[c])},
                            {"precision", r.precision[c]},
                            {"recall", r.recall[c]},
                            {"f1", r.f1[c]}});
  }
  j["macro_f1"] = r.macro_f1;
  j["macro_accuracy"] = r.macro_accuracy;
  j["macro_accuracy_definition"] = r.macro_accuracy_definition;
  if (r.baseline) {
    j["baseline"] = {{"f1_delta", r.baseline->f1_delta},
                     {"macro_f1_delta", r.baseline->macro_f1_delta}};
  }
  return j;
}

}  // namespace

std::string render_report(const MetricReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Text: return render_text(report);
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Json: return to_json(report).dump(2) + "\n";
  }
  throw std::logic_error("unreachable report format");
}

MetricReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  MetricReport r;
  const auto& classes = j.at("classes");
  if (classes.size() != data::kNumClasses) {
    throw std::runtime_error("report JSON must list all nine classes");
  }
  for (int c = 0; c < data::kNumClasses; ++c) {
    r.precision[c] = classes[c].at("precision").get<double>();
    r.recall[c] = classes[c].at("recall").get<double>();
    r.f1[c] = classes[c].at("f1").get<double>();
  }
  r.macro_f1 = j.at("macro_f1").get<double>();
  r.macro_accuracy = j.at("macro_accuracy").get<double>();
  r.macro_accuracy_definition = j.at("macro_accuracy_definition").get<std::string>();
  if (j.contains("baseline")) {
    BaselineComparison cmp;
    const auto& deltas = j.at("baseline").at("f1_delta");
    for (int c = 0; c < data::kNumClasses; ++c) cmp.f1_delta[c] = deltas[c].get<double>();
    cmp.macro_f1_delta = j.at("baseline").at("macro_f1_delta").get<double>();
    r.baseline = cmp;
  }
  return r;
}

}  // namespace scene::eval
