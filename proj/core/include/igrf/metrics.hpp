#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "igrf/matrix.hpp"

namespace igrf {

/// k x k counts, rows = true class, columns = predicted class.
struct ConfusionMatrix {
  std::size_t k = 0;
  std::vector<std::size_t> counts;

  explicit ConfusionMatrix(std::size_t k_ = 0) : k(k_), counts(k_ * k_, 0) {}

  std::size_t& at(std::size_t truth, std::size_t predicted) { return counts[truth * k + predicted]; }
  std::size_t at(std::size_t truth, std::size_t predicted) const { return counts[truth * k + predicted]; }

  std::size_t total() const;
  std::size_t trace() const;
  std::size_t row_sum(std::size_t c) const;   // support of class c
  std::size_t col_sum(std::size_t c) const;   // predictions of class c
};

ConfusionMatrix confusion(std::span<const std::int32_t> truth,
                          std::span<const std::int32_t> predicted, std::size_t k);

/// One-vs-all rates for a class; 0/0 cases are defined as 0.
struct ClassRates {
  double precision = 0.0;
  double recall = 0.0;
  double fpr = 0.0;
  double f1 = 0.0;
};

ClassRates rates(const ConfusionMatrix& cm, std::size_t c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// ROC swept over descending unique score thresholds (predict positive when
/// score >= threshold), with (0,0) and (1,1) endpoints; AUC by trapezoid.
/// Requires at least one positive and one negative sample.
RocCurve roc_auc(std::span<const double> scores, std::span<const std::int32_t> truth_binary);

struct EvalReport {
  std::size_t k = 0;
  ConfusionMatrix cm;
  std::vector<ClassRates> per_class;
  std::vector<std::size_t> support;
  double accuracy = 0.0;
  ClassRates weighted;             // support-weighted averages
  std::vector<RocCurve> roc;       // per class; empty when no probabilities given
  std::vector<std::string> class_names;  // optional labels for emission
};

/// Per-class metrics, support-weighted aggregates, accuracy, and (when a
/// row-stochastic probability matrix is supplied) one-vs-all ROC/AUC per
/// class.
EvalReport weighted_report(std::span<const std::int32_t> truth,
                           std::span<const std::int32_t> predicted, std::size_t k,
                           const Matrix* probabilities = nullptr);

}  // namespace igrf
