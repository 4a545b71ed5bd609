#include "ieegdec/metrics.hpp"

#include "ieegdec/error.hpp"

namespace ieegdec {

ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          int positive_class) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::kLengthMismatch, "evaluation",
                "y_true has " + std::to_string(y_true.size()) + " entries, y_pred has " +
                    std::to_string(y_pred.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == positive_class;
    const bool predicted = y_pred[i] == positive_class;
    if (actual && predicted) ++c.tp;
    else if (!actual && predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics precision_recall_f1(const ConfusionCounts& c) {
  Metrics m;
  const auto ratio = [](std::int64_t num, std::int64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  const double sum = m.precision + m.recall;
  m.f1 = sum > 0.0 ? 2.0 * m.precision * m.recall / sum : 0.0;
  return m;
}

double f1_score(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                int positive_class) {
  return precision_recall_f1(confusion(y_true, y_pred, positive_class)).f1;
}

}  // namespace ieegdec
