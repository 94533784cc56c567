#pragma once

#include "agfti/common.hpp"

#include <span>
#include <string>
#include <vector>

namespace agfti {

struct ClassificationMetrics {
  double acc = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
  double precision_micro = 0.0;
  double f1_micro = 0.0;
  std::vector<int> absent_classes;  ///< in neither truth nor prediction
  std::vector<std::string> warnings;
};

/// c x c counts, rows = truth, columns = prediction.
Eigen::MatrixXi confusion_matrix(std::span<const int> pred, std::span<const int> truth, int c);

/// Macro scores average the per-class precision and F1 over all c classes;
/// a class with no predictions (or no true members) scores 0 on the affected
/// quantity. Macro-F1 is the mean of per-class F1, not the F1 of the macro
/// precision and recall.
ClassificationMetrics compute_metrics(std::span<const int> pred, std::span<const int> truth,
                                      int c);

}  // namespace agfti
