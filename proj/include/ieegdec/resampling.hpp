#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace ieegdec {

struct ResamplePlan {
  int k_neighbors = 5;
  std::uint64_t seed = 0;
};

// Where a synthetic row came from: row = x[base] + delta * (x[neighbor] - x[base]).
struct SyntheticOrigin {
  Eigen::Index base = 0;
  Eigen::Index neighbor = 0;
  double delta = 0.0;
};

struct SmoteResult {
  Eigen::MatrixXd x;   // original rows first, in input order, then synthetic rows
  std::vector<int> y;
  std::vector<SyntheticOrigin> origins;  // one per synthetic row
  int k_used = 0;
  bool k_clipped = false;  // k was reduced to minority_count - 1
};

// Upsample the minority class of a binary training split to the majority
// count. Neighbours are found by Euclidean distance after standardizing with
// the statistics of `x` itself.
SmoteResult smote(const Eigen::MatrixXd& x, const std::vector<int>& y, const ResamplePlan& plan);

// Indices (into `x`) of the k nearest minority rows to minority row `row`,
// nearest first, ties by index. Exposed for membership checks.
std::vector<Eigen::Index> minority_neighbors(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                             Eigen::Index row, int k);

}  // namespace ieegdec
