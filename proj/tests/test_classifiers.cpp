#include <gtest/gtest.h>

#include <cmath>

#include "ieegdec/classifiers.hpp"
#include "ieegdec/error.hpp"
#include "ieegdec/rng.hpp"
#include "ieegdec/trees.hpp"

using namespace ieegdec;

namespace {

struct Dataset {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

// Two Gaussian blobs (unit sigma) whose centres are `separation` apart along a random direction.
Dataset blobs(int n, int p, double separation, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd dir(p);
  for (int j = 0; j < p; ++j) dir[j] = rng.normal();
  dir.normalize();
  Dataset d{Eigen::MatrixXd(n, p), {}};
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    for (int j = 0; j < p; ++j) d.x(i, j) = rng.normal() + (label ? 0.5 : -0.5) * separation * dir[j];
    d.y.push_back(label);
  }
  return d;
}

// Four clusters at (+-1, +-1); label = sign(x0) xor sign(x1).
Dataset xor_clusters(int n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d{Eigen::MatrixXd(n, 2), {}};
  for (int i = 0; i < n; ++i) {
    const int a = i % 2, b = (i / 2) % 2;
    d.x(i, 0) = (a ? 1.0 : -1.0) + 0.15 * rng.normal();
    d.x(i, 1) = (b ? 1.0 : -1.0) + 0.15 * rng.normal();
    d.y.push_back(a ^ b);
  }
  return d;
}

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
  int hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == pred[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::string name(ClassifierKind kind) { return std::string(to_string(kind)); }

}  // namespace

class EveryKind : public ::testing::TestWithParam<ClassifierKind> {};

TEST_P(EveryKind, SeparatesBlobs) {
  const Dataset d = blobs(100, 18, 6.0, 42);
  const TrainedModel m = fit(GetParam(), d.x, d.y);
  EXPECT_GE(accuracy(d.y, predict(m, d.x)), 0.99) << name(GetParam());
}

TEST_P(EveryKind, ThresholdedScoresEqualLabels) {
  const Dataset d = blobs(120, 18, 1.5, 7);
  const TrainedModel m = fit(GetParam(), d.x, d.y);
  const Dataset probe = blobs(100, 18, 1.5, 8);
  const Eigen::VectorXd s = predict_score(m, probe.x);
  const std::vector<int> labels = predict(m, probe.x);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    EXPECT_GE(s[i], 0.0);
    EXPECT_LE(s[i], 1.0);
    EXPECT_EQ(labels[static_cast<std::size_t>(i)], s[i] > 0.5 ? 1 : 0);
  }
  EXPECT_EQ(predict(m, probe.x), labels);
}

TEST_P(EveryKind, DeterministicGivenSeed) {
  const Dataset d = blobs(80, 18, 1.0, 9);
  Hyperparameters hp;
  hp.seed = 1234;
  const TrainedModel a = fit(GetParam(), d.x, d.y, hp);
  const TrainedModel b = fit(GetParam(), d.x, d.y, hp);
  const Dataset probe = blobs(50, 18, 1.0, 10);
  EXPECT_EQ(predict_score(a, probe.x), predict_score(b, probe.x));
  EXPECT_EQ(model_to_json(a), model_to_json(b));
}

TEST_P(EveryKind, JsonRoundTripIsPredictionIdentical) {
  const Dataset d = blobs(90, 18, 1.2, 11);
  const TrainedModel m = fit(GetParam(), d.x, d.y);
  const TrainedModel back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.kind, m.kind);
  const Dataset probe = blobs(60, 18, 1.2, 12);
  EXPECT_EQ(predict_score(back, probe.x), predict_score(m, probe.x));
  EXPECT_EQ(model_to_json(back), model_to_json(m));
}

TEST_P(EveryKind, StandardizationUsesTrainingRowsOnly) {
  Dataset d = blobs(60, 18, 2.0, 13);
  d.x.col(3).array() = d.x.col(3).array() * 100.0 + 7.0;
  const TrainedModel m = fit(GetParam(), d.x, d.y);
  const Eigen::VectorXd mean = d.x.colwise().mean();
  EXPECT_LE((m.feature_mean - mean).cwiseAbs().maxCoeff(), 1e-9);
  const Eigen::VectorXd sd = ((d.x.rowwise() - mean.transpose()).array().square().colwise().mean()).sqrt();
  EXPECT_LE((m.feature_scale - sd).cwiseAbs().maxCoeff(), 1e-9 * sd.maxCoeff());
}

TEST_P(EveryKind, ContractErrors) {
  const Dataset d = blobs(20, 18, 3.0, 14);
  try {
    fit(GetParam(), d.x, std::vector<int>(20, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
  Eigen::MatrixXd bad = d.x;
  bad(3, 4) = std::numeric_limits<double>::infinity();
  try {
    fit(GetParam(), bad, d.y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
  const TrainedModel m = fit(GetParam(), d.x, d.y);
  try {
    predict(m, Eigen::MatrixXd::Zero(3, 17));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  EXPECT_TRUE(predict(m, Eigen::MatrixXd(0, 18)).empty());
}

INSTANTIATE_TEST_SUITE_P(Classifiers, EveryKind, ::testing::ValuesIn(kAllClassifierKinds),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Classifiers, XorSeparatesLinearFromNonlinear) {
  double linear = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = xor_clusters(200, seed);
    EXPECT_GE(accuracy(d.y, predict(fit(ClassifierKind::kRandomForest, d.x, d.y), d.x)), 0.95);
    EXPECT_GE(accuracy(d.y, predict(fit(ClassifierKind::kSvm, d.x, d.y), d.x)), 0.95);
    linear += accuracy(d.y, predict(fit(ClassifierKind::kLogisticRegression, d.x, d.y), d.x)) / 5.0;
  }
  EXPECT_NEAR(linear, 0.5, 0.1);
}

TEST(Classifiers, NaiveBayesScoresAreProbabilities) {
  const Dataset d = blobs(100, 18, 2.0, 21);
  const TrainedModel m = fit(ClassifierKind::kNaiveBayes, d.x, d.y);
  const Eigen::VectorXd s = predict_score(m, d.x);
  EXPECT_GE(s.minCoeff(), 0.0);
  EXPECT_LE(s.maxCoeff(), 1.0);
  // Complement: swapping the labels mirrors the score.
  std::vector<int> flipped;
  for (int v : d.y) flipped.push_back(1 - v);
  const Eigen::VectorXd s2 = predict_score(fit(ClassifierKind::kNaiveBayes, d.x, flipped), d.x);
  EXPECT_LE((s + s2 - Eigen::VectorXd::Ones(s.size())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Classifiers, LogisticMidpointScoreIsNearHalf) {
  // Mirror-symmetric blobs: every point has its reflection in the other class.
  const Dataset half = blobs(50, 18, 3.0, 22);
  Dataset d{Eigen::MatrixXd(100, 18), {}};
  for (int i = 0; i < 50; ++i) {
    d.x.row(2 * i) = half.x.row(i);
    d.x.row(2 * i + 1) = -half.x.row(i);
    d.y.push_back(half.y[static_cast<std::size_t>(i)]);
    d.y.push_back(1 - half.y[static_cast<std::size_t>(i)]);
  }
  const TrainedModel m = fit(ClassifierKind::kLogisticRegression, d.x, d.y);
  const Eigen::MatrixXd midpoint = Eigen::MatrixXd::Zero(1, 18);
  EXPECT_NEAR(predict_score(m, midpoint)[0], 0.5, 0.1);
}

TEST(Classifiers, SingleUnboundedTreeFitsConsistentData) {
  const Dataset d = blobs(150, 18, 0.5, 23);
  Hyperparameters hp;
  hp.random_forest.n_trees = 1;
  hp.random_forest.max_depth = 0;
  hp.random_forest.bootstrap = false;
  hp.random_forest.max_features = 18;
  const TrainedModel m = fit(ClassifierKind::kRandomForest, d.x, d.y, hp);
  EXPECT_EQ(accuracy(d.y, predict(m, d.x)), 1.0);
  EXPECT_EQ(std::get<ForestModel>(m.parameters).trees.size(), 1u);
}

TEST(Classifiers, BoostingLossIsNonIncreasing) {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    const Dataset d = blobs(120, 18, 1.0, seed);
    const TrainedModel m = fit(ClassifierKind::kXgboost, d.x, d.y);
    const auto& loss = std::get<BoostedModel>(m.parameters).training_loss;
    ASSERT_EQ(loss.size(), 101u);
    for (std::size_t r = 1; r < loss.size(); ++r) EXPECT_LE(loss[r], loss[r - 1] + 1e-15) << "round " << r;
    EXPECT_LT(loss.back(), loss.front());
  }
}

TEST(Classifiers, BoostingBaseMarginIsPriorLogOdds) {
  Dataset d = blobs(100, 18, 1.0, 34);
  d.y.assign(100, 0);
  for (int i = 0; i < 30; ++i) d.y[static_cast<std::size_t>(i)] = 1;
  const TrainedModel m = fit(ClassifierKind::kXgboost, d.x, d.y);
  EXPECT_NEAR(std::get<BoostedModel>(m.parameters).base_margin, std::log(0.3 / 0.7), 1e-12);
}

TEST(Classifiers, SvmDecisionAndScoreAgree) {
  const Dataset d = blobs(80, 18, 2.0, 35);
  const TrainedModel m = fit(ClassifierKind::kSvm, d.x, d.y);
  const Eigen::VectorXd f = svm_decision_function(m, d.x);
  const Eigen::VectorXd s = predict_score(m, d.x);
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    EXPECT_NEAR(s[i], 1.0 / (1.0 + std::exp(-f[i])), 1e-12);
    EXPECT_EQ(s[i] > 0.5, f[i] > 0.0);
  }
}

TEST(Classifiers, KindNamesRoundTrip) {
  for (ClassifierKind k : kAllClassifierKinds) EXPECT_EQ(classifier_kind_from_string(to_string(k)), k);
  EXPECT_THROW(classifier_kind_from_string("knn"), Error);
}

TEST(Classifiers, RejectsBadHyperparameters) {
  const Dataset d = blobs(20, 18, 3.0, 36);
  Hyperparameters hp;
  hp.random_forest.n_trees = 0;
  EXPECT_THROW(fit(ClassifierKind::kRandomForest, d.x, d.y, hp), Error);
  hp = {};
  hp.svm.c = -1;
  EXPECT_THROW(fit(ClassifierKind::kSvm, d.x, d.y, hp), Error);
}

TEST(Trees, GiniTreeSplitsOnInformativeFeature) {
  Eigen::MatrixXd x(8, 2);
  x << 0, 5, 1, 4, 2, 3, 3, 2, 4, 1, 5, 0, 6, 9, 7, 8;
  const std::vector<int> y = {0, 0, 0, 0, 1, 1, 1, 1};
  std::vector<Eigen::Index> rows(8);
  for (Eigen::Index i = 0; i < 8; ++i) rows[static_cast<std::size_t>(i)] = i;
  Rng rng(1);
  const Tree t = grow_gini_tree(x, y, rows, GiniTreeOptions{}, rng);
  ASSERT_GE(t.nodes.size(), 3u);
  EXPECT_EQ(t.nodes[0].feature, 0);
  EXPECT_EQ(t.depth(), 1);
  for (Eigen::Index i = 0; i < 8; ++i) EXPECT_EQ(t.evaluate(x.row(i)), y[static_cast<std::size_t>(i)]);
}

TEST(Trees, NewtonLeafWeightIsRegularizedNewtonStep) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 1);
  Eigen::VectorXd g(4), h(4);
  g << 0.5, -0.25, 0.75, 0.1;
  h << 0.25, 0.25, 0.25, 0.25;
  NewtonTreeOptions opts;
  opts.lambda = 1.0;
  const Tree t = grow_newton_tree(x, g, h, opts);
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_NEAR(t.nodes[0].value, -g.sum() / (h.sum() + 1.0), 1e-15);
}
