#include "scene/eval/reference.hpp"

#include <cmath>

#include "scene/eval/report.hpp"

namespace scene::eval {

const ConfusionMatrix& reference_confusion() {
  static const ConfusionMatrix cm = [] {
    ConfusionMatrix m;
    const std::int64_t rows[9][9] = {
        {201, 0, 0, 0, 7, 1, 0, 0, 12},    // Absence
        {0, 217, 7, 0, 1, 0, 0, 0, 1},     // Cooking
        {0, 0, 215, 3, 0, 1, 0, 0, 1},     // Dishwashing
        {2, 0, 2, 200, 8, 0, 0, 0, 4},     // Eating
        {35, 3, 0, 6, 156, 1, 0, 0, 11},   // Other
        {0, 0, 2, 1, 3, 220, 0, 0, 0},     // Social activity
        {0, 0, 0, 0, 0, 0, 222, 0, 0},     // Vacuum cleaning
        {0, 0, 0, 0, 0, 0, 0, 214, 0},     // Watching TV
        {17, 1, 2, 4, 15, 0, 0, 0, 173},   // Working
    };
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) m.counts[i][j] = rows[i][j];
    }
    return m;
  }();
  return cm;
}

const std::array<double, data::kNumClasses>& reference_f1() {
  static const std::array<double, data::kNumClasses> values = {
      84.45, 97.09, 95.98, 93.02, 77.61, 97.99, 100.0, 100.0, 83.57,
  };
  return values;
}

double reference_macro_f1() { return 92.19; }

ReferenceCheckResult verify_reference_metrics(const ConfusionMatrix& cm,
                                              double tolerance_pp) {
  ReferenceCheckResult result;
  result.computed = metric_report(cm);
  for (int c = 0; c < data::kNumClasses; ++c) {
    const double diff = std::abs(result.computed.f1[c] - reference_f1()[c]);
    if (diff > tolerance_pp) {
      result.pass = false;
      result.failures.push_back(std::string(data::class_names()[c]) + ": computed F1 " +
                                format_pct(result.computed.f1[c]) + " vs published " +
                                format_pct(reference_f1()[c]));
    }
  }
  if (std::abs(result.computed.macro_f1 - reference_macro_f1()) > tolerance_pp) {
    result.pass = false;
    result.failures.push_back("macro F1: computed " + format_pct(result.computed.macro_f1) +
                              " vs published " + format_pct(reference_macro_f1()));
  }
  return result;
}

ReferenceCheckResult verify_reference_metrics() {
  return verify_reference_metrics(reference_confusion(), 0.01);
}

}  // namespace scene::eval
