#include "scene/eval/metrics.hpp"

namespace scene::eval {

MetricReport per_class_f1(const ConfusionMatrix& cm) {
  MetricReport r;
  for (int c = 0; c < data::kNumClasses; ++c) {
    const double tp = static_cast<double>(cm.counts[c][c]);
    const double col = static_cast<double>(cm.col_sum(c));
    const double row = static_cast<double>(cm.row_sum(c));
    r.precision[c] = col > 0.0 ? 100.0 * tp / col : 0.0;
    r.recall[c] = row > 0.0 ? 100.0 * tp / row : 0.0;
    // F1 = 2PR/(P+R) = 2*TP/(row+col); 0 when the class never appears
    r.f1[c] = (row + col) > 0.0 ? 200.0 * tp / (row + col) : 0.0;
  }
  return r;
}

double macro_f1(const std::array<double, data::kNumClasses>& per_class) {
  double sum = 0.0;
  for (double v : per_class) sum += v;
  return sum / data::kNumClasses;
}

double macro_accuracy(const ConfusionMatrix& cm) {
  double sum = 0.0;
  for (int c = 0; c < data::kNumClasses; ++c) {
    const double row = static_cast<double>(cm.row_sum(c));
    sum += row > 0.0 ? 100.0 * static_cast<double>(cm.counts[c][c]) / row : 0.0;
  }
  return sum / data::kNumClasses;
}

MetricReport metric_report(const ConfusionMatrix& cm) {
  MetricReport r = per_class_f1(cm);
  r.macro_f1 = macro_f1(r.f1);
  r.macro_accuracy = macro_accuracy(cm);
  return r;
}

const std::array<double, data::kNumClasses>& baseline_f1() {
  static const std::array<double, data::kNumClasses> values = {
      85.41, 95.14, 76.73, 83.64, 44.76, 93.92, 99.31, 99.59, 82.03,
  };
  return values;
}

double baseline_macro_f1() { return 84.50; }

BaselineComparison compare_to_baseline(const MetricReport& report) {
  BaselineComparison cmp;
  for (int c = 0; c < data::kNumClasses; ++c) {
    cmp.f1_delta[c] = report.f1[c] - baseline_f1()[c];
  }
  cmp.macro_f1_delta = report.macro_f1 - baseline_macro_f1();
  return cmp;
}

}  // namespace scene::eval
