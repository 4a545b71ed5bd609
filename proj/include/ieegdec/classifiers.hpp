#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ieegdec/trees.hpp"

namespace ieegdec {

enum class ClassifierKind { kLogisticRegression, kNaiveBayes, kRandomForest, kSvm, kXgboost };

inline constexpr ClassifierKind kAllClassifierKinds[] = {
    ClassifierKind::kLogisticRegression, ClassifierKind::kNaiveBayes,
    ClassifierKind::kRandomForest, ClassifierKind::kSvm, ClassifierKind::kXgboost};

std::string_view to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(std::string_view name);

struct LogisticRegressionOptions {
  double l2 = 1.0;
  int max_iter = 500;
  double tol = 1e-8;
};

struct NaiveBayesOptions {
  double var_floor = 1e-9;
};

struct RandomForestOptions {
  int n_trees = 100;
  int max_depth = 8;     // <= 0: unlimited
  int max_features = 0;  // <= 0: round(sqrt(n_features))
  bool bootstrap = true;
  int min_samples_split = 2;
};

struct SvmOptions {
  double c = 1.0;
  double gamma = 1.0 / 18.0;  // RBF width; <= 0: 1 / n_features
  double tol = 1e-3;
  int max_iter = 1'000'000;
};

struct XgboostOptions {
  int n_rounds = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  double lambda = 1.0;
  double gamma = 0.0;
  double min_child_weight = 1.0;
};

struct Hyperparameters {
  LogisticRegressionOptions logistic_regression;
  NaiveBayesOptions naive_bayes;
  RandomForestOptions random_forest;
  SvmOptions svm;
  XgboostOptions xgboost;
  bool standardize = true;
  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) when a setting is outside its valid range.
  void validate() const;
};

struct LogisticModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
};

struct NaiveBayesModel {
  Eigen::MatrixXd means;      // [2 x n_features], row = class
  Eigen::MatrixXd variances;  // [2 x n_features]
  Eigen::Vector2d log_prior = Eigen::Vector2d::Zero();
};

struct ForestModel {
  std::vector<Tree> trees;
};

struct SvmModel {
  Eigen::MatrixXd support_vectors;  // standardized rows
  Eigen::VectorXd dual_coef;        // alpha_i * y_i
  double bias = 0.0;
  double gamma = 0.0;
};

struct BoostedModel {
  double base_margin = 0.0;
  double learning_rate = 0.1;
  std::vector<Tree> trees;
  // Mean logistic deviance on the training rows: initial, then after each round.
  std::vector<double> training_loss;
};

using ModelParameters =
    std::variant<LogisticModel, NaiveBayesModel, ForestModel, SvmModel, BoostedModel>;

struct TrainedModel {
  ClassifierKind kind = ClassifierKind::kLogisticRegression;
  Hyperparameters hyperparameters;
  Eigen::VectorXd feature_mean;
  Eigen::VectorXd feature_scale;  // all ones when standardization is off
  ModelParameters parameters;

  Eigen::Index n_features() const { return feature_mean.size(); }
};

// Train a binary classifier on labels in {0, 1}. Standardization statistics
// come only from `x`.
TrainedModel fit(ClassifierKind kind, const Eigen::MatrixXd& x, const std::vector<int>& y,
                 const Hyperparameters& hp = {});

// Positive-class score in [0, 1]; SVM margins are squashed logistically.
Eigen::VectorXd predict_score(const TrainedModel& model, const Eigen::MatrixXd& x);

// Label = score > 0.5.
std::vector<int> predict(const TrainedModel& model, const Eigen::MatrixXd& x);

// Raw SVM decision value (before squashing); kInvalidArgument for other kinds.
Eigen::VectorXd svm_decision_function(const TrainedModel& model, const Eigen::MatrixXd& x);

// Self-describing JSON document. Round-trips every double exactly.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);

}  // namespace ieegdec
