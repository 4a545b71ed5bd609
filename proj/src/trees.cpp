#include "ieegdec/trees.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

namespace ieegdec {
namespace {

double split_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return (mid < hi) ? mid : lo;
}

struct GiniSplit {
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

// Weighted child impurity n_L * gini_L + n_R * gini_R of the best cut on `feature`.
GiniSplit best_gini_cut(const Eigen::MatrixXd& x, const std::vector<int>& y,
                        std::vector<Eigen::Index>& rows, int feature) {
  std::sort(rows.begin(), rows.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double va = x(a, feature), vb = x(b, feature);
    return va < vb || (va == vb && a < b);
  });
  const double n = static_cast<double>(rows.size());
  double pos_total = 0.0;
  for (auto r : rows) pos_total += y[static_cast<std::size_t>(r)];

  GiniSplit best;
  double pos_left = 0.0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    pos_left += y[static_cast<std::size_t>(rows[i])];
    const double lo = x(rows[i], feature);
    const double hi = x(rows[i + 1], feature);
    if (!(lo < hi)) continue;
    const double nl = static_cast<double>(i + 1);
    const double nr = n - nl;
    const double pl = pos_left / nl;
    const double pr = (pos_total - pos_left) / nr;
    const double impurity = nl * 2.0 * pl * (1.0 - pl) + nr * 2.0 * pr * (1.0 - pr);
    if (impurity < best.impurity) {
      best = GiniSplit{feature, split_threshold(lo, hi), impurity};
    }
  }
  return best;
}

}  // namespace

double Tree::evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  int idx = 0;
  while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
    const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
    idx = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(idx)].value;
}

int Tree::depth() const {
  std::function<int(int)> rec = [&](int i) -> int {
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    if (n.feature < 0) return 0;
    return 1 + std::max(rec(n.left), rec(n.right));
  };
  return nodes.empty() ? 0 : rec(0);
}

Tree grow_gini_tree(const Eigen::MatrixXd& x, const std::vector<int>& y,
                    const std::vector<Eigen::Index>& rows, const GiniTreeOptions& options,
                    Rng& rng) {
  const int p = static_cast<int>(x.cols());
  const int candidates =
      options.max_features <= 0 ? p : std::min(options.max_features, p);
  Tree tree;

  std::function<int(std::vector<Eigen::Index>, int)> build =
      [&](std::vector<Eigen::Index> node_rows, int depth) -> int {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double positives = 0.0;
    for (auto r : node_rows) positives += y[static_cast<std::size_t>(r)];
    const double frac = positives / static_cast<double>(node_rows.size());
    tree.nodes[static_cast<std::size_t>(id)].value = frac;

    const bool pure = positives == 0.0 || positives == static_cast<double>(node_rows.size());
    const bool depth_reached = options.max_depth > 0 && depth >= options.max_depth;
    if (pure || depth_reached ||
        static_cast<int>(node_rows.size()) < std::max(2, options.min_samples_split)) {
      return id;
    }

    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    GiniSplit best;
    for (int k = 0; k < p; ++k) {
      if (k >= candidates && best.feature >= 0) break;
      GiniSplit cut = best_gini_cut(x, y, node_rows, order[static_cast<std::size_t>(k)]);
      if (cut.feature >= 0 && cut.impurity < best.impurity) best = cut;
    }
    if (best.feature < 0) return id;

    std::vector<Eigen::Index> left, right;
    for (auto r : node_rows) {
      (x(r, best.feature) <= best.threshold ? left : right).push_back(r);
    }
    node_rows.clear();
    node_rows.shrink_to_fit();
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  };

  build(rows, 0);
  return tree;
}

Tree grow_newton_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& grad,
                      const Eigen::VectorXd& hess, const NewtonTreeOptions& options) {
  const int p = static_cast<int>(x.cols());
  const double lambda = options.lambda;
  auto score = [lambda](double g, double h) { return g * g / (h + lambda); };
  Tree tree;

  std::function<int(std::vector<Eigen::Index>, int)> build =
      [&](std::vector<Eigen::Index> node_rows, int depth) -> int {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double g_total = 0.0, h_total = 0.0;
    for (auto r : node_rows) {
      g_total += grad[r];
      h_total += hess[r];
    }
    tree.nodes[static_cast<std::size_t>(id)].value = -g_total / (h_total + lambda);
    if (depth >= options.max_depth || node_rows.size() < 2) return id;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 0.0;
    const double parent = score(g_total, h_total);
    for (int f = 0; f < p; ++f) {
      std::sort(node_rows.begin(), node_rows.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double va = x(a, f), vb = x(b, f);
        return va < vb || (va == vb && a < b);
      });
      double gl = 0.0, hl = 0.0;
      for (std::size_t i = 0; i + 1 < node_rows.size(); ++i) {
        gl += grad[node_rows[i]];
        hl += hess[node_rows[i]];
        const double lo = x(node_rows[i], f);
        const double hi = x(node_rows[i + 1], f);
        if (!(lo < hi)) continue;
        const double hr = h_total - hl;
        if (hl < options.min_child_weight || hr < options.min_child_weight) continue;
        const double gain =
            0.5 * (score(gl, hl) + score(g_total - gl, hr) - parent) - options.gamma;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = split_threshold(lo, hi);
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<Eigen::Index> left, right;
    for (auto r : node_rows) (x(r, best_feature) <= best_threshold ? left : right).push_back(r);
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
  };

  std::vector<Eigen::Index> all(static_cast<std::size_t>(x.rows()));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  build(std::move(all), 0);
  return tree;
}

}  // namespace ieegdec
