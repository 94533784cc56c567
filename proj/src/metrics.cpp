#include "agfti/metrics.hpp"

namespace agfti {

Eigen::MatrixXi confusion_matrix(std::span<const int> pred, std::span<const int> truth, int c) {
  if (pred.size() != truth.size()) throw InvalidArgument("metrics: length mismatch");
  if (c <= 0) throw InvalidArgument("metrics: class count must be positive");
  Eigen::MatrixXi cm = Eigen::MatrixXi::Zero(c, c);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || pred[i] >= c || truth[i] < 0 || truth[i] >= c) {
      throw InvalidArgument("metrics: label outside [0, c)");
    }
    ++cm(truth[i], pred[i]);
  }
  return cm;
}

ClassificationMetrics compute_metrics(std::span<const int> pred, std::span<const int> truth,
                                      int c) {
  const Eigen::MatrixXi cm = confusion_matrix(pred, truth, c);
  ClassificationMetrics out;
  const double total = static_cast<double>(pred.size());
  if (total == 0.0) {
    out.warnings.push_back("no samples to evaluate");
    return out;
  }

  const double correct = cm.diagonal().sum();
  double prec_sum = 0.0, rec_sum = 0.0, f1_sum = 0.0;
  for (int k = 0; k < c; ++k) {
    const double tp = cm(k, k);
    const double predicted = cm.col(k).sum();
    const double actual = cm.row(k).sum();
    if (predicted == 0.0 && actual == 0.0) {
      out.absent_classes.push_back(k);
      out.warnings.push_back("class " + std::to_string(k) +
                             " absent from truth and prediction; scored 0");
    }
    const double p = predicted > 0.0 ? tp / predicted : 0.0;
    const double r = actual > 0.0 ? tp / actual : 0.0;
    prec_sum += p;
    rec_sum += r;
    f1_sum += (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
  }
  out.acc = correct / total;
  out.precision_macro = prec_sum / c;
  out.recall_macro = rec_sum / c;
  out.f1_macro = f1_sum / c;
  double tp_all = 0.0, predicted_all = 0.0, actual_all = 0.0;
  for (int k = 0; k < c; ++k) {
    tp_all += cm(k, k);
    predicted_all += cm.col(k).sum();
    actual_all += cm.row(k).sum();
  }
  out.precision_micro = tp_all / predicted_all;
  const double recall_micro = tp_all / actual_all;
  out.f1_micro = (out.precision_micro + recall_micro > 0.0)
                     ? 2.0 * out.precision_micro * recall_micro / (out.precision_micro + recall_micro)
                     : 0.0;
  return out;
}

}  // namespace agfti
