#include "igrf/metrics.hpp"

#include <algorithm>

#include "igrf/errors.hpp"

namespace igrf {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  return n;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < k; ++c) n += at(c, c);
  return n;
}

std::size_t ConfusionMatrix::row_sum(std::size_t c) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < k; ++p) n += at(c, p);
  return n;
}

std::size_t ConfusionMatrix::col_sum(std::size_t c) const {
  std::size_t n = 0;
  for (std::size_t t = 0; t < k; ++t) n += at(t, c);
  return n;
}

ConfusionMatrix confusion(std::span<const std::int32_t> truth,
                          std::span<const std::int32_t> predicted, std::size_t k) {
  if (truth.size() != predicted.size()) throw DataError("confusion: length mismatch");
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    if (t >= k || p >= k) throw DataError("confusion: label out of range");
    ++cm.at(t, p);
  }
  return cm;
}

namespace {

inline double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassRates rates(const ConfusionMatrix& cm, std::size_t c) {
  const std::size_t tp = cm.at(c, c);
  const std::size_t fn = cm.row_sum(c) - tp;
  const std::size_t fp = cm.col_sum(c) - tp;
  const std::size_t tn = cm.total() - tp - fn - fp;

  ClassRates r;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  r.fpr = ratio(fp, tn + fp);
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * (r.precision * r.recall) / (r.precision + r.recall)
             : 0.0;
  return r;
}

RocCurve roc_auc(std::span<const double> scores, std::span<const std::int32_t> truth_binary) {
  if (scores.size() != truth_binary.size()) throw DataError("roc_auc: length mismatch");
  std::size_t positives = 0, negatives = 0;
  for (std::int32_t t : truth_binary) (t != 0 ? positives : negatives) += 1;
  if (positives == 0 || negatives == 0) {
    throw DataError("roc_auc: need at least one positive and one negative sample");
  }

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  double auc = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0;

  std::size_t i = 0;
  while (i < order.size()) {
    // Consume the whole tied-score block as a single threshold step.
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (truth_binary[order[i]] != 0 ? tp : fp) += 1;
      ++i;
    }
    const double fpr = static_cast<double>(fp) / static_cast<double>(negatives);
    const double tpr = static_cast<double>(tp) / static_cast<double>(positives);
    auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    curve.points.push_back({fpr, tpr});
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0) {
    curve.points.push_back({1.0, 1.0});
  }
  curve.auc = auc;
  return curve;
}

EvalReport weighted_report(std::span<const std::int32_t> truth,
                           std::span<const std::int32_t> predicted, std::size_t k,
                           const Matrix* probabilities) {
  EvalReport report;
  report.k = k;
  report.cm = confusion(truth, predicted, k);
  report.accuracy = ratio(report.cm.trace(), report.cm.total());

  const std::size_t total = report.cm.total();
  report.per_class.resize(k);
  report.support.resize(k);
  double wp = 0.0, wr = 0.0, wf = 0.0, wfpr = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    report.per_class[c] = rates(report.cm, c);
    report.support[c] = report.cm.row_sum(c);
    const auto w = static_cast<double>(report.support[c]);
    wp += w * report.per_class[c].precision;
    wr += w * report.per_class[c].recall;
    wf += w * report.per_class[c].f1;
    wfpr += w * report.per_class[c].fpr;
  }
  if (total > 0) {
    const auto n = static_cast<double>(total);
    report.weighted.precision = wp / n;
    report.weighted.recall = wr / n;
    report.weighted.f1 = wf / n;
    report.weighted.fpr = wfpr / n;
  }

  if (probabilities != nullptr) {
    if (probabilities->rows != truth.size() || probabilities->cols != k) {
      throw DataError("weighted_report: probability matrix shape mismatch");
    }
    report.roc.resize(k);
    std::vector<double> scores(truth.size());
    std::vector<std::int32_t> binary(truth.size());
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < truth.size(); ++i) {
        scores[i] = (*probabilities)(i, c);
        binary[i] = truth[i] == static_cast<std::int32_t>(c) ? 1 : 0;
      }
      const std::size_t support = report.support[c];
      if (support > 0 && support < truth.size()) {
        report.roc[c] = roc_auc(scores, binary);
      }
    }
  }
  return report;
}

}  // namespace igrf
