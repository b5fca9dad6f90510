#pragma once

#include <array>
#include <optional>
#include <string>

#include "scene/eval/confusion.hpp"

namespace scene::eval {

/// Per-class baseline F1 deltas, in percentage points.
struct BaselineComparison {
  std::array<double, data::kNumClasses> f1_delta{};
  double macro_f1_delta = 0.0;

  bool operator==(const BaselineComparison&) const = default;
};

/// All values are percentages in [0, 100]. Macro values are unweighted
/// means over the nine classes. "Macro accuracy" here is mean per-class
/// recall (balanced accuracy); the definition travels with the report.
struct MetricReport {
  std::array<double, data::kNumClasses> precision{};
  std::array<double, data::kNumClasses> recall{};
  std::array<double, data::kNumClasses> f1{};
  double macro_f1 = 0.0;
  double macro_accuracy = 0.0;
  std::string macro_accuracy_definition = "mean per-class recall";
  std::optional<BaselineComparison> baseline;

  bool operator==(const MetricReport&) const = default;
};

/// Per-class precision/recall/F1 from a confusion matrix. A 0/0 ratio
/// (empty row, column, or both) is defined as 0.
MetricReport per_class_f1(const ConfusionMatrix& cm);

double macro_f1(const std::array<double, data::kNumClasses>& per_class);

/// Mean per-class recall, as a percentage.
double macro_accuracy(const ConfusionMatrix& cm);

/// Full report: per-class metrics, macro F1, macro accuracy.
MetricReport metric_report(const ConfusionMatrix& cm);

/// Published per-class F1 of the DCASE 2018 Task 5 baseline system (percent).
const std::array<double, data::kNumClasses>& baseline_f1();
double baseline_macro_f1();

/// Deltas of the report against the embedded baseline constants.
BaselineComparison compare_to_baseline(const MetricReport& report);

}  // namespace scene::eval
