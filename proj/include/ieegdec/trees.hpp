#pragma once

#include <vector>

#include <Eigen/Core>

#include "ieegdec/rng.hpp"

namespace ieegdec {

// Flat binary tree; a node with feature < 0 is a leaf holding `value`.
// Samples with x[feature] <= threshold go left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  int depth() const;
};

struct GiniTreeOptions {
  int max_depth = 8;  // <= 0: unlimited
  int max_features = 0;  // <= 0: all features
  int min_samples_split = 2;
};

// CART classification tree on binary labels. Leaves hold the fraction of
// positive samples. `rows` may repeat indices (bootstrap). When none of the
// sampled candidate features can split a node, the remaining features are
// tried before the node becomes a leaf.
Tree grow_gini_tree(const Eigen::MatrixXd& x, const std::vector<int>& y,
                    const std::vector<Eigen::Index>& rows, const GiniTreeOptions& options, Rng& rng);

struct NewtonTreeOptions {
  int max_depth = 3;
  double lambda = 1.0;
  double gamma = 0.0;
  double min_child_weight = 1.0;
};

// Second-order regression tree for gradient boosting: exact greedy splits on
// the regularised gain, leaf weight -G / (H + lambda).
Tree grow_newton_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& grad,
                      const Eigen::VectorXd& hess, const NewtonTreeOptions& options);

}  // namespace ieegdec
