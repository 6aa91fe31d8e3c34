#include "dsf/metrics.hpp"

#include <string>

#include "dsf/error.hpp"

namespace dsf {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1(double tp, double fp, double fn) {
  const double p = ratio(tp, tp + fp);
  const double r = ratio(tp, tp + fn);
  return ratio(2.0 * p * r, p + r);
}

}  // namespace

std::uint64_t ConfusionCounts::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts) {
    for (auto v : row) n += v;
  }
  return n;
}

ConfusionCounts confusion(std::span<const Label> gold, std::span<const Label> pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " labels, predictions have " +
                    std::to_string(pred.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) ++c.at(gold[i], pred[i]);
  return c;
}

double class_f1(const ConfusionCounts& c, Label label) {
  const auto k = index_of(label);
  double tp = static_cast<double>(c.counts[k][k]);
  double row = 0, col = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    row += static_cast<double>(c.counts[k][j]);
    col += static_cast<double>(c.counts[j][k]);
  }
  return f1(tp, col - tp, row - tp);
}

MetricsReport score(const ConfusionCounts& c) {
  const auto total = c.total();
  if (total == 0) throw DataError("cannot score an empty confusion matrix");

  MetricsReport r;
  double trace = 0;
  for (std::size_t k = 0; k < 3; ++k) trace += static_cast<double>(c.counts[k][k]);
  r.accuracy = trace / static_cast<double>(total);

  const double fp = class_f1(c, Label::positive);
  const double fn = class_f1(c, Label::negative);
  const double fu = class_f1(c, Label::neutral);
  r.f1_macro = (fp + fn + fu) / 3.0;
  r.f1_pm_macro = (fp + fn) / 2.0;

  // Pooled decisions of the two sentiment classes.
  double tp = 0, pred_pm = 0, gold_pm = 0;
  for (auto l : {Label::positive, Label::negative}) {
    const auto k = index_of(l);
    tp += static_cast<double>(c.counts[k][k]);
    for (std::size_t j = 0; j < 3; ++j) {
      pred_pm += static_cast<double>(c.counts[j][k]);
      gold_pm += static_cast<double>(c.counts[k][j]);
    }
  }
  r.f1_pm_micro = f1(tp, pred_pm - tp, gold_pm - tp);
  return r;
}

}  // namespace dsf
