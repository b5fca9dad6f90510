#pragma once

#include <string>
#include <vector>

#include "scene/eval/metrics.hpp"

namespace scene::eval {

/// Published confusion matrix of the DCASE 2018 Task 5 combined ensemble
/// on the development test split.
const ConfusionMatrix& reference_confusion();

/// Published per-class F1 of that system (percent), same class order.
const std::array<double, data::kNumClasses>& reference_f1();
double reference_macro_f1();  // 92.19

struct ReferenceCheckResult {
  bool pass = true;
  MetricReport computed;
  std::vector<std::string> failures;  // one line per disagreeing value
};

/// Recomputes the per-class and macro F1 from a confusion matrix and
/// compares against the published figures at the given tolerance
/// (percentage points). Defaults to the embedded reference matrix; tests
/// pass perturbed copies to confirm sensitivity.
ReferenceCheckResult verify_reference_metrics(const ConfusionMatrix& cm,
                                              double tolerance_pp = 0.01);
ReferenceCheckResult verify_reference_metrics();

}  // namespace scene::eval
