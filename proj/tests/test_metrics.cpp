#include <gtest/gtest.h>

#include "ieegdec/error.hpp"
#include "ieegdec/metrics.hpp"

using namespace ieegdec;

TEST(Metrics, AllSmallConfusionMatrices) {
  int cases = 0;
  for (int tp = 0; tp <= 5; ++tp) {
    for (int fp = 0; fp <= 5; ++fp) {
      for (int fn = 0; fn <= 5; ++fn) {
        for (int tn = 0; tn <= 5; ++tn) {
          std::vector<int> truth, pred;
          auto add = [&](int n, int t, int p) {
            for (int i = 0; i < n; ++i) {
              truth.push_back(t);
              pred.push_back(p);
            }
          };
          add(tp, 1, 1);
          add(fp, 0, 1);
          add(fn, 1, 0);
          add(tn, 0, 0);
          const ConfusionCounts c = confusion(truth, pred, 1);
          EXPECT_EQ(c, (ConfusionCounts{tp, fp, fn, tn}));
          const Metrics m = precision_recall_f1(c);
          const double p = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
          const double r = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
          const double f1 = tp ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
          EXPECT_NEAR(m.precision, p, 1e-15);
          EXPECT_NEAR(m.recall, r, 1e-15);
          EXPECT_NEAR(m.f1, f1, 1e-15);
          EXPECT_NEAR(f1_score(truth, pred, 1), f1, 1e-15);
          ++cases;
        }
      }
    }
  }
  EXPECT_EQ(cases, 1296);
}

TEST(Metrics, PositiveClassSelectsCounts) {
  const std::vector<int> truth = {2, 2, 5, 5, 7};
  const std::vector<int> pred = {2, 5, 5, 2, 2};
  EXPECT_EQ(confusion(truth, pred, 2), (ConfusionCounts{1, 2, 1, 1}));
}

TEST(Metrics, LengthMismatch) {
  try {
    confusion({1, 0}, {1}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}
