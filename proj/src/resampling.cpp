#include "ieegdec/resampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>

#include "ieegdec/error.hpp"
#include "ieegdec/rng.hpp"

namespace ieegdec {
namespace {

constexpr const char* kModule = "resampling";

Eigen::MatrixXd standardized(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::RowVectorXd sd = (x.rowwise() - mean).array().square().colwise().mean().sqrt();
  for (Eigen::Index c = 0; c < sd.size(); ++c) {
    if (!(sd[c] > 1e-12)) sd[c] = 1.0;
  }
  return (x.rowwise() - mean).array().rowwise() / sd.array();
}

std::vector<Eigen::Index> nearest(const Eigen::MatrixXd& z, const std::vector<Eigen::Index>& pool,
                                  Eigen::Index row, int k) {
  std::vector<std::pair<double, Eigen::Index>> dist;
  dist.reserve(pool.size());
  for (Eigen::Index other : pool) {
    if (other == row) continue;
    dist.emplace_back((z.row(other) - z.row(row)).squaredNorm(), other);
  }
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take), dist.end());
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back(dist[i].second);
  return out;
}

struct ClassSplit {
  int minority = 0;
  std::vector<Eigen::Index> minority_rows;
  std::size_t majority_count = 0;
};

ClassSplit split_classes(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw Error(ErrorCode::kShapeMismatch, kModule, "feature rows and labels differ in length");
  }
  std::array<std::vector<Eigen::Index>, 2> rows;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error(ErrorCode::kInvalidArgument, kModule, "labels must be 0 or 1");
    rows[static_cast<std::size_t>(y[i])].push_back(static_cast<Eigen::Index>(i));
  }
  if (rows[0].empty() || rows[1].empty()) {
    throw Error(ErrorCode::kSingleClass, kModule, "smote needs both classes present");
  }
  // Class 1 is the minority on ties; a tie means nothing is generated anyway.
  const int minority = rows[0].size() < rows[1].size() ? 0 : 1;
  return ClassSplit{minority, rows[static_cast<std::size_t>(minority)],
                    rows[static_cast<std::size_t>(1 - minority)].size()};
}

}  // namespace

std::vector<Eigen::Index> minority_neighbors(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                             Eigen::Index row, int k) {
  const ClassSplit split = split_classes(x, y);
  return nearest(standardized(x), split.minority_rows, row, k);
}

SmoteResult smote(const Eigen::MatrixXd& x, const std::vector<int>& y, const ResamplePlan& plan) {
  if (plan.k_neighbors < 1) throw Error(ErrorCode::kInvalidArgument, kModule, "k_neighbors must be >= 1");
  const ClassSplit split = split_classes(x, y);
  const std::size_t n_min = split.minority_rows.size();
  if (n_min < 2) {
    throw Error(ErrorCode::kTooFewMinority, kModule, "smote needs at least 2 minority rows");
  }

  SmoteResult out;
  out.k_used = plan.k_neighbors;
  if (static_cast<std::size_t>(plan.k_neighbors) > n_min - 1) {
    out.k_used = static_cast<int>(n_min - 1);
    out.k_clipped = true;
    std::cerr << "warning: smote k_neighbors=" << plan.k_neighbors << " clipped to "
              << out.k_used << " (minority has " << n_min << " rows)\n";
  }

  const std::size_t n_synthetic = split.majority_count - n_min;
  out.x.resize(x.rows() + static_cast<Eigen::Index>(n_synthetic), x.cols());
  out.x.topRows(x.rows()) = x;
  out.y = y;
  if (n_synthetic == 0) return out;

  const Eigen::MatrixXd z = standardized(x);
  std::vector<std::vector<Eigen::Index>> neighbor_cache(n_min);

  // Base rows cycle through a seeded permutation of the minority so every
  // minority row seeds floor or ceil(n_synthetic / n_min) synthetic rows.
  Rng rng(plan.seed);
  std::vector<std::size_t> order(n_min);
  for (std::size_t i = 0; i < n_min; ++i) order[i] = i;
  rng.shuffle(order);

  for (std::size_t s = 0; s < n_synthetic; ++s) {
    const std::size_t slot = order[s % n_min];
    const Eigen::Index base = split.minority_rows[slot];
    auto& nbrs = neighbor_cache[slot];
    if (nbrs.empty()) nbrs = nearest(z, split.minority_rows, base, out.k_used);
    const Eigen::Index neighbor = nbrs[static_cast<std::size_t>(rng.uniform_index(nbrs.size()))];
    const double delta = rng.uniform();
    const Eigen::Index dst = x.rows() + static_cast<Eigen::Index>(s);
    out.x.row(dst) = x.row(base) + delta * (x.row(neighbor) - x.row(base));
    out.y.push_back(split.minority);
    out.origins.push_back(SyntheticOrigin{base, neighbor, delta});
  }
  return out;
}

}  // namespace ieegdec
