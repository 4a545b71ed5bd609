#include "ieegdec/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <array>

#include "ieegdec/error.hpp"

namespace ieegdec {
namespace {

constexpr const char* kModule = "classifiers";
constexpr double kScaleFloor = 1e-12;

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
  throw Error(code, kModule, message);
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean,
                            const Eigen::VectorXd& scale) {
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

// ---------------------------------------------------------------- logistic

double logistic_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w, double b, double l2) {
  const Eigen::VectorXd z = (x * w).array() + b;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) loss += softplus(z[i]) - y[i] * z[i];
  return (loss + 0.5 * l2 * w.squaredNorm()) / static_cast<double>(x.rows());
}

LogisticModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const LogisticRegressionOptions& opt) {
  const double n = static_cast<double>(x.rows());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  double b = 0.0;
  double objective = logistic_objective(x, y, w, b, opt.l2);
  double step = 1.0;

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    const Eigen::VectorXd z = (x * w).array() + b;
    const Eigen::VectorXd residual = z.unaryExpr([](double v) { return sigmoid(v); }) - y;
    const Eigen::VectorXd grad_w = (x.transpose() * residual + opt.l2 * w) / n;
    const double grad_b = residual.sum() / n;
    const double grad_sq = grad_w.squaredNorm() + grad_b * grad_b;
    if (std::sqrt(grad_sq) < opt.tol) break;

    // Armijo backtracking, warm-started from the previous accepted step.
    step = std::min(1e4, step * 2.0);
    double candidate = objective;
    Eigen::VectorXd w_next;
    double b_next = b;
    while (true) {
      w_next = w - step * grad_w;
      b_next = b - step * grad_b;
      candidate = logistic_objective(x, y, w_next, b_next, opt.l2);
      if (candidate <= objective - 0.5 * step * grad_sq || step < 1e-12) break;
      step *= 0.5;
    }
    const double decrease = objective - candidate;
    if (decrease < 0.0) break;
    w = std::move(w_next);
    b = b_next;
    objective = candidate;
    if (decrease <= opt.tol * std::max(1.0, std::abs(objective))) break;
  }
  return LogisticModel{w, b};
}

// ------------------------------------------------------------- naive bayes

NaiveBayesModel fit_naive_bayes(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                const NaiveBayesOptions& opt) {
  NaiveBayesModel m;
  m.means = Eigen::MatrixXd::Zero(2, x.cols());
  m.variances = Eigen::MatrixXd::Zero(2, x.cols());
  Eigen::Vector2d counts = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    m.means.row(c) += x.row(i);
    counts[c] += 1.0;
  }
  for (int c = 0; c < 2; ++c) m.means.row(c) /= counts[c];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    m.variances.row(c).array() += (x.row(i) - m.means.row(c)).array().square();
  }
  for (int c = 0; c < 2; ++c) {
    m.variances.row(c) /= counts[c];
    m.variances.row(c).array() += opt.var_floor;
  }
  m.log_prior = (counts / counts.sum()).array().log();
  return m;
}

double naive_bayes_score(const NaiveBayesModel& m, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  std::array<double, 2> log_joint{};
  for (int c = 0; c < 2; ++c) {
    const auto var = m.variances.row(c).array();
    const auto diff = x.array() - m.means.row(c).array();
    log_joint[static_cast<std::size_t>(c)] =
        m.log_prior[c] - 0.5 * ((2.0 * std::numbers::pi * var).log() + diff.square() / var).sum();
  }
  return sigmoid(log_joint[1] - log_joint[0]);
}

// ----------------------------------------------------------- random forest

ForestModel fit_forest(const Eigen::MatrixXd& x, const std::vector<int>& y,
                       const RandomForestOptions& opt, std::uint64_t seed) {
  GiniTreeOptions tree_opt;
  tree_opt.max_depth = opt.max_depth;
  tree_opt.max_features =
      opt.max_features > 0
          ? opt.max_features
          : std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(x.cols())))));
  tree_opt.min_samples_split = opt.min_samples_split;

  ForestModel forest;
  forest.trees.reserve(static_cast<std::size_t>(opt.n_trees));
  const auto n = static_cast<std::size_t>(x.rows());
  for (int t = 0; t < opt.n_trees; ++t) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    std::vector<Eigen::Index> rows(n);
    if (opt.bootstrap) {
      for (auto& r : rows) r = static_cast<Eigen::Index>(rng.uniform_index(n));
    } else {
      std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    }
    forest.trees.push_back(grow_gini_tree(x, y, rows, tree_opt, rng));
  }
  return forest;
}

// --------------------------------------------------------------------- svm

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma) {
  const Eigen::VectorXd na = a.rowwise().squaredNorm();
  const Eigen::VectorXd nb = b.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = (-2.0 * a * b.transpose()).colwise() + na;
  d2.rowwise() += nb.transpose();
  return (-gamma * d2.array().max(0.0)).exp().matrix();
}

// Dual C-SVC solved by SMO with second-order working-set selection.
SvmModel fit_svm(const Eigen::MatrixXd& x, const std::vector<int>& labels, const SvmOptions& opt) {
  const Eigen::Index n = x.rows();
  const double gamma = opt.gamma > 0.0 ? opt.gamma : 1.0 / static_cast<double>(x.cols());
  const double c = opt.c;
  constexpr double kTau = 1e-12;

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
  const Eigen::MatrixXd k = rbf_kernel(x, x, gamma);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g = Eigen::VectorXd::Constant(n, -1.0);

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (alpha[t] < c && -g[t] >= gmax) { gmax = -g[t]; i = t; }
      } else {
        if (alpha[t] > 0 && g[t] >= gmax) { gmax = g[t]; i = t; }
      }
    }
    if (i < 0) break;

    double gmax2 = -std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    double best_obj = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      const double qit = y[i] * y[t] * k(i, t);
      if (y[t] > 0) {
        if (alpha[t] > 0) {
          const double grad_diff = gmax + g[t];
          gmax2 = std::max(gmax2, g[t]);
          if (grad_diff > 0) {
            double quad = k(i, i) + k(t, t) - 2.0 * y[i] * qit;
            if (quad <= 0) quad = kTau;
            const double obj = -grad_diff * grad_diff / quad;
            if (obj <= best_obj) { best_obj = obj; j = t; }
          }
        }
      } else {
        if (alpha[t] < c) {
          const double grad_diff = gmax - g[t];
          gmax2 = std::max(gmax2, -g[t]);
          if (grad_diff > 0) {
            double quad = k(i, i) + k(t, t) + 2.0 * y[i] * qit;
            if (quad <= 0) quad = kTau;
            const double obj = -grad_diff * grad_diff / quad;
            if (obj <= best_obj) { best_obj = obj; j = t; }
          }
        }
      }
    }
    if (gmax + gmax2 < opt.tol || j < 0) break;

    const double qij = y[i] * y[j] * k(i, j);
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    double ai = old_ai, aj = old_aj;
    if (y[i] != y[j]) {
      double quad = k(i, i) + k(j, j) + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-g[i] - g[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) { aj = 0; ai = diff; }
      } else {
        if (ai < 0) { ai = 0; aj = -diff; }
      }
      if (diff > 0) {
        if (ai > c) { ai = c; aj = c - diff; }
      } else {
        if (aj > c) { aj = c; ai = c + diff; }
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (g[i] - g[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) { ai = c; aj = sum - c; }
      } else {
        if (aj < 0) { aj = 0; ai = sum; }
      }
      if (sum > c) {
        if (aj > c) { aj = c; ai = sum - c; }
      } else {
        if (ai < 0) { ai = 0; aj = sum; }
      }
    }
    alpha[i] = ai;
    alpha[j] = aj;
    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    for (Eigen::Index t = 0; t < n; ++t) {
      g[t] += y[t] * (y[i] * k(i, t) * dai + y[j] * k(j, t) * daj);
    }
  }

  // rho: mean of y*G over free vectors, else midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int n_free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * g[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;

  SvmModel m;
  m.gamma = gamma;
  m.bias = -rho;
  std::vector<Eigen::Index> support;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha[t] > 0) support.push_back(t);
  }
  m.support_vectors.resize(static_cast<Eigen::Index>(support.size()), x.cols());
  m.dual_coef.resize(static_cast<Eigen::Index>(support.size()));
  for (std::size_t s = 0; s < support.size(); ++s) {
    m.support_vectors.row(static_cast<Eigen::Index>(s)) = x.row(support[s]);
    m.dual_coef[static_cast<Eigen::Index>(s)] = alpha[support[s]] * y[support[s]];
  }
  return m;
}

Eigen::VectorXd svm_margin(const SvmModel& m, const Eigen::MatrixXd& xs) {
  if (m.support_vectors.rows() == 0) return Eigen::VectorXd::Constant(xs.rows(), m.bias);
  return (rbf_kernel(xs, m.support_vectors, m.gamma) * m.dual_coef).array() + m.bias;
}

// ----------------------------------------------------------------- boosting

double mean_deviance(const Eigen::VectorXd& margin, const Eigen::VectorXd& y) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margin.size(); ++i) loss += softplus(margin[i]) - y[i] * margin[i];
  return loss / static_cast<double>(margin.size());
}

BoostedModel fit_boosting(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const XgboostOptions& opt) {
  BoostedModel m;
  const double prior = y.mean();
  m.base_margin = std::log(prior / (1.0 - prior));
  m.learning_rate = opt.learning_rate;
  NewtonTreeOptions tree_opt{opt.max_depth, opt.lambda, opt.gamma, opt.min_child_weight};

  Eigen::VectorXd margin = Eigen::VectorXd::Constant(x.rows(), m.base_margin);
  m.training_loss.push_back(mean_deviance(margin, y));
  Eigen::VectorXd grad(x.rows()), hess(x.rows());
  for (int round = 0; round < opt.n_rounds; ++round) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - y[i];
      hess[i] = std::max(p * (1.0 - p), 1e-16);
    }
    Tree tree = grow_newton_tree(x, grad, hess, tree_opt);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      margin[i] += opt.learning_rate * tree.evaluate(x.row(i));
    }
    m.trees.push_back(std::move(tree));
    m.training_loss.push_back(mean_deviance(margin, y));
  }
  return m;
}

void check_input(const TrainedModel& model, const Eigen::MatrixXd& x) {
  if (x.rows() > 0 && x.cols() != model.n_features()) {
    fail(ErrorCode::kShapeMismatch, "expected " + std::to_string(model.n_features()) +
                                        " feature columns, got " + std::to_string(x.cols()));
  }
}

}  // namespace

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kLogisticRegression: return "logistic_regression";
    case ClassifierKind::kNaiveBayes: return "naive_bayes";
    case ClassifierKind::kRandomForest: return "random_forest";
    case ClassifierKind::kSvm: return "svm";
    case ClassifierKind::kXgboost: return "xgboost";
  }
  return "unknown";
}

ClassifierKind classifier_kind_from_string(std::string_view name) {
  for (ClassifierKind k : kAllClassifierKinds) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorCode::kInvalidArgument, "unknown classifier kind '" + std::string(name) + "'");
}

void Hyperparameters::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::kInvalidArgument, std::string("invalid hyperparameter: ") + what);
  };
  require(logistic_regression.l2 >= 0.0, "logistic_regression.l2 >= 0");
  require(logistic_regression.max_iter >= 1, "logistic_regression.max_iter >= 1");
  require(logistic_regression.tol > 0.0, "logistic_regression.tol > 0");
  require(naive_bayes.var_floor >= 0.0, "naive_bayes.var_floor >= 0");
  require(random_forest.n_trees >= 1, "random_forest.n_trees >= 1");
  require(random_forest.min_samples_split >= 2, "random_forest.min_samples_split >= 2");
  require(svm.c > 0.0, "svm.c > 0");
  require(svm.tol > 0.0, "svm.tol > 0");
  require(svm.max_iter >= 1, "svm.max_iter >= 1");
  require(xgboost.n_rounds >= 1, "xgboost.n_rounds >= 1");
  require(xgboost.max_depth >= 1, "xgboost.max_depth >= 1");
  require(xgboost.learning_rate > 0.0, "xgboost.learning_rate > 0");
  require(xgboost.lambda >= 0.0, "xgboost.lambda >= 0");
  require(xgboost.gamma >= 0.0, "xgboost.gamma >= 0");
  require(xgboost.min_child_weight >= 0.0, "xgboost.min_child_weight >= 0");
}

TrainedModel fit(ClassifierKind kind, const Eigen::MatrixXd& x, const std::vector<int>& y,
                 const Hyperparameters& hp) {
  hp.validate();
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    fail(ErrorCode::kShapeMismatch, "feature rows and labels differ in length");
  }
  if (x.cols() < 1) fail(ErrorCode::kShapeMismatch, "feature matrix has no columns");
  if (!x.allFinite()) fail(ErrorCode::kNonFinite, "feature matrix contains non-finite values");
  std::array<int, 2> counts{0, 0};
  for (int label : y) {
    if (label != 0 && label != 1) fail(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    ++counts[static_cast<std::size_t>(label)];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    fail(ErrorCode::kSingleClass, "training labels contain a single class");
  }
  if (counts[0] < 2 || counts[1] < 2) {
    fail(ErrorCode::kInvalidArgument, "each class needs at least 2 training rows");
  }

  TrainedModel model;
  model.kind = kind;
  model.hyperparameters = hp;
  if (hp.standardize) {
    model.feature_mean = x.colwise().mean().transpose();
    model.feature_scale =
        ((x.rowwise() - model.feature_mean.transpose()).array().square().colwise().mean())
            .sqrt()
            .transpose();
    for (Eigen::Index c = 0; c < model.feature_scale.size(); ++c) {
      if (!(model.feature_scale[c] > kScaleFloor)) model.feature_scale[c] = 1.0;
    }
  } else {
    model.feature_mean = Eigen::VectorXd::Zero(x.cols());
    model.feature_scale = Eigen::VectorXd::Ones(x.cols());
  }
  const Eigen::MatrixXd xs = standardize(x, model.feature_mean, model.feature_scale);
  Eigen::VectorXd yv(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) yv[i] = y[static_cast<std::size_t>(i)];

  switch (kind) {
    case ClassifierKind::kLogisticRegression:
      model.parameters = fit_logistic(xs, yv, hp.logistic_regression);
      break;
    case ClassifierKind::kNaiveBayes:
      model.parameters = fit_naive_bayes(xs, y, hp.naive_bayes);
      break;
    case ClassifierKind::kRandomForest:
      model.parameters = fit_forest(xs, y, hp.random_forest, hp.seed);
      break;
    case ClassifierKind::kSvm:
      model.parameters = fit_svm(xs, y, hp.svm);
      break;
    case ClassifierKind::kXgboost:
      model.parameters = fit_boosting(xs, yv, hp.xgboost);
      break;
  }
  return model;
}

Eigen::VectorXd predict_score(const TrainedModel& model, const Eigen::MatrixXd& x) {
  check_input(model, x);
  if (x.rows() == 0) return Eigen::VectorXd(0);
  const Eigen::MatrixXd xs = standardize(x, model.feature_mean, model.feature_scale);
  Eigen::VectorXd score(xs.rows());

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LogisticModel>) {
          const Eigen::VectorXd z = (xs * m.weights).array() + m.intercept;
          score = z.unaryExpr([](double v) { return sigmoid(v); });
        } else if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          for (Eigen::Index i = 0; i < xs.rows(); ++i) score[i] = naive_bayes_score(m, xs.row(i));
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          for (Eigen::Index i = 0; i < xs.rows(); ++i) {
            double s = 0.0;
            for (const Tree& t : m.trees) s += t.evaluate(xs.row(i));
            score[i] = s / static_cast<double>(m.trees.size());
          }
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          score = svm_margin(m, xs).unaryExpr([](double v) { return sigmoid(v); });
        } else {
          for (Eigen::Index i = 0; i < xs.rows(); ++i) {
            double margin = m.base_margin;
            for (const Tree& t : m.trees) margin += m.learning_rate * t.evaluate(xs.row(i));
            score[i] = sigmoid(margin);
          }
        }
      },
      model.parameters);
  return score;
}

std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& x) {
  const Eigen::VectorXd score = predict_score(model, x);
  std::vector<int> labels(static_cast<std::size_t>(score.size()));
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    labels[static_cast<std::size_t>(i)] = score[i] > 0.5 ? 1 : 0;
  }
  return labels;
}

Eigen::VectorXd svm_decision_function(const TrainedModel& model, const Eigen::MatrixXd& x) {
  const auto* m = std::get_if<SvmModel>(&model.parameters);
  if (m == nullptr) fail(ErrorCode::kInvalidArgument, "decision function requires an svm model");
  check_input(model, x);
  if (x.rows() == 0) return Eigen::VectorXd(0);
  return svm_margin(*m, standardize(x, model.feature_mean, model.feature_scale));
}

}  // namespace ieegdec
