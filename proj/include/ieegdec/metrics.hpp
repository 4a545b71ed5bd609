#pragma once

#include <cstdint>
#include <vector>

namespace ieegdec {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Counts with respect to `positive_class`; every other label is negative.
ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          int positive_class = 1);

// precision = TP/(TP+FP), recall = TP/(TP+FN), F1 = 2PR/(P+R); 0/0 -> 0.
Metrics precision_recall_f1(const ConfusionCounts& c);

double f1_score(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                int positive_class = 1);

}  // namespace ieegdec
