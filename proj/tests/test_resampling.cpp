#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "ieegdec/error.hpp"
#include "ieegdec/resampling.hpp"
#include "ieegdec/rng.hpp"

using namespace ieegdec;

namespace {

struct Fixture {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Fixture imbalanced(int n_min, int n_maj, int p, std::uint64_t seed, int minority_label = 1) {
  Rng rng(seed);
  Fixture f{Eigen::MatrixXd(n_min + n_maj, p), {}};
  std::vector<int> labels(static_cast<std::size_t>(n_min), minority_label);
  labels.insert(labels.end(), static_cast<std::size_t>(n_maj), 1 - minority_label);
  rng.shuffle(labels);
  for (int i = 0; i < n_min + n_maj; ++i) {
    for (int j = 0; j < p; ++j) f.x(i, j) = rng.normal() * (j + 1) * 10.0 + (labels[static_cast<std::size_t>(i)] ? 3.0 : 0.0);
  }
  f.y = labels;
  return f;
}

// Brute-force k nearest minority rows in z-scored space (population SD, SD ~ 0 -> 1).
std::set<Eigen::Index> oracle_neighbors(const Fixture& f, Eigen::Index row, int minority, int k) {
  const Eigen::Index n = f.x.rows(), p = f.x.cols();
  Eigen::MatrixXd z(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mean += f.x(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) var += (f.x(i, j) - mean) * (f.x(i, j) - mean);
    double sd = std::sqrt(var / static_cast<double>(n));
    if (!(sd > 1e-12)) sd = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = (f.x(i, j) - mean) / sd;
  }
  std::vector<std::pair<double, Eigen::Index>> d;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == row || f.y[static_cast<std::size_t>(i)] != minority) continue;
    double s = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) s += (z(i, j) - z(row, j)) * (z(i, j) - z(row, j));
    d.emplace_back(s, i);
  }
  std::sort(d.begin(), d.end());
  std::set<Eigen::Index> out;
  for (int i = 0; i < k && i < static_cast<int>(d.size()); ++i) out.insert(d[static_cast<std::size_t>(i)].second);
  return out;
}

}  // namespace

TEST(Smote, BalancesSixteenVersusSeventyThree) {
  const Fixture f = imbalanced(16, 73, 18, 1);
  const SmoteResult r = smote(f.x, f.y, {5, 77});
  const auto ones = std::count(r.y.begin(), r.y.end(), 1);
  const auto zeros = std::count(r.y.begin(), r.y.end(), 0);
  EXPECT_EQ(ones, 73);
  EXPECT_EQ(zeros, 73);
  EXPECT_EQ(r.x.rows(), 146);
  EXPECT_EQ(r.origins.size(), 57u);
}

TEST(Smote, OriginalRowsFirstAndVerbatim) {
  const Fixture f = imbalanced(10, 40, 6, 2, 0);
  const SmoteResult r = smote(f.x, f.y, {5, 3});
  EXPECT_EQ(r.x.topRows(f.x.rows()), f.x);
  EXPECT_TRUE(std::equal(f.y.begin(), f.y.end(), r.y.begin()));
  for (std::size_t i = f.y.size(); i < r.y.size(); ++i) EXPECT_EQ(r.y[i], 0);
}

TEST(Smote, SyntheticPointsAreConvexCombinationsOfNeighbours) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 1000; ++seed) {
    const Fixture f = imbalanced(12 + static_cast<int>(seed % 7), 60, 5, 100 + seed);
    const SmoteResult r = smote(f.x, f.y, {5, seed});
    for (std::size_t s = 0; s < r.origins.size() && checked < 1000; ++s, ++checked) {
      const SyntheticOrigin& o = r.origins[s];
      const Eigen::RowVectorXd row = r.x.row(f.x.rows() + static_cast<Eigen::Index>(s));
      ASSERT_EQ(f.y[static_cast<std::size_t>(o.base)], 1);
      ASSERT_EQ(f.y[static_cast<std::size_t>(o.neighbor)], 1);
      ASSERT_GE(o.delta, 0.0);
      ASSERT_LE(o.delta, 1.0);
      const Eigen::RowVectorXd a = f.x.row(o.base), b = f.x.row(o.neighbor);
      EXPECT_LE((row - (a + o.delta * (b - a))).cwiseAbs().maxCoeff(), 1e-12);
      for (Eigen::Index j = 0; j < row.size(); ++j) {
        EXPECT_GE(row[j], std::min(a[j], b[j]) - 1e-12);
        EXPECT_LE(row[j], std::max(a[j], b[j]) + 1e-12);
      }
      const auto nbrs = oracle_neighbors(f, o.base, 1, r.k_used);
      EXPECT_TRUE(nbrs.count(o.neighbor)) << "neighbour is not among the k nearest";
    }
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Smote, TwoPointSegment) {
  Eigen::MatrixXd x(5, 2);
  x << 0, 0, 1, 1, 5, 2, 6, 3, 7, 1;
  const std::vector<int> y = {1, 1, 0, 0, 0};
  const SmoteResult r = smote(x, y, {1, 9});
  ASSERT_EQ(r.x.rows(), 6);
  const Eigen::RowVectorXd s = r.x.row(5);
  EXPECT_NEAR(s[0], s[1], 1e-15);
  EXPECT_GE(s[0], 0.0);
  EXPECT_LE(s[0], 1.0);
}

TEST(Smote, BalancedInputIsUnchanged) {
  const Fixture f = imbalanced(20, 20, 4, 3);
  const SmoteResult r = smote(f.x, f.y, {5, 1});
  EXPECT_EQ(r.x, f.x);
  EXPECT_EQ(r.y, f.y);
  EXPECT_TRUE(r.origins.empty());
}

TEST(Smote, KIsClippedForTinyMinorities) {
  const Fixture f = imbalanced(3, 20, 4, 4);
  const SmoteResult r = smote(f.x, f.y, {5, 1});
  EXPECT_TRUE(r.k_clipped);
  EXPECT_EQ(r.k_used, 2);
  EXPECT_EQ(std::count(r.y.begin(), r.y.end(), 1), 20);
}

TEST(Smote, Errors) {
  const Fixture f = imbalanced(1, 20, 4, 5);
  try {
    smote(f.x, f.y, {5, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewMinority);
  }
  try {
    smote(f.x, std::vector<int>(21, 0), {5, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
}

TEST(Smote, DeterministicAndSeedSensitive) {
  const Fixture f = imbalanced(10, 50, 6, 6);
  const SmoteResult a = smote(f.x, f.y, {5, 11});
  const SmoteResult b = smote(f.x, f.y, {5, 11});
  const SmoteResult c = smote(f.x, f.y, {5, 12});
  EXPECT_EQ(a.x, b.x);
  EXPECT_NE(a.x, c.x);
}

TEST(Smote, MajorityRowsNeverCreatedOrRemoved) {
  const Fixture f = imbalanced(9, 31, 3, 7);
  const SmoteResult r = smote(f.x, f.y, {5, 2});
  std::vector<Eigen::Index> majority_in, majority_out;
  for (std::size_t i = 0; i < f.y.size(); ++i) if (f.y[i] == 0) majority_in.push_back(static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < r.y.size(); ++i) if (r.y[i] == 0) majority_out.push_back(static_cast<Eigen::Index>(i));
  EXPECT_EQ(majority_in, majority_out);
}

TEST(Smote, NeighbourQueryMatchesOracle) {
  const Fixture f = imbalanced(15, 30, 4, 8);
  for (std::size_t i = 0; i < f.y.size(); ++i) {
    if (f.y[i] != 1) continue;
    const auto got = minority_neighbors(f.x, f.y, static_cast<Eigen::Index>(i), 4);
    EXPECT_EQ(std::set<Eigen::Index>(got.begin(), got.end()), oracle_neighbors(f, static_cast<Eigen::Index>(i), 1, 4));
  }
}
