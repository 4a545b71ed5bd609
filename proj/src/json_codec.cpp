#include "json_codec.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ieegdec::codec {
namespace {

using nlohmann::json;

constexpr const char* kModule = "classifiers";

[[noreturn]] void corrupt(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, kModule, "model document: " + message);
}

json tree_to_value(const Tree& tree) {
  json nodes = json::array();
  for (const TreeNode& n : tree.nodes) {
    nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
  }
  return nodes;
}

Tree tree_from_value(const json& value) {
  Tree tree;
  for (const json& n : value) {
    if (!n.is_array() || n.size() != 5) corrupt("tree node must be a 5-element array");
    tree.nodes.push_back(TreeNode{n[0].get<int>(), n[1].get<double>(), n[2].get<int>(),
                                  n[3].get<int>(), n[4].get<double>()});
  }
  const int count = static_cast<int>(tree.nodes.size());
  if (count == 0) corrupt("empty tree");
  for (const TreeNode& n : tree.nodes) {
    if (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count)) {
      corrupt("tree child index out of range");
    }
  }
  return tree;
}

json trees_to_value(const std::vector<Tree>& trees) {
  json out = json::array();
  for (const Tree& t : trees) out.push_back(tree_to_value(t));
  return out;
}

std::vector<Tree> trees_from_value(const json& value) {
  std::vector<Tree> trees;
  for (const json& t : value) trees.push_back(tree_from_value(t));
  return trees;
}

json matrix_to_value(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Eigen::MatrixXd matrix_from_value(const json& value) {
  const auto rows = value.at("rows").get<Eigen::Index>();
  const auto cols = value.at("cols").get<Eigen::Index>();
  Eigen::MatrixXd m(rows, cols);
  const json& data = value.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) corrupt("matrix row count mismatch");
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(data[static_cast<std::size_t>(r)].size()) != cols) {
      corrupt("matrix column count mismatch");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = data[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

void write_value(std::ostringstream& out, const json& v, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) { out << "{}"; return; }
      out << '{' << nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_value(out, it.value(), indent, level + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) { out << "[]"; return; }
      out << '[' << nl;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',' << nl;
        out << pad;
        write_value(out, v[i], indent, level + 1);
      }
      out << nl << close_pad << ']';
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) { out << "null"; return; }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out << buf;
      return;
    }
    default:
      out << v.dump();
  }
}

}  // namespace

void require_known_keys(const json& object, std::initializer_list<const char*> allowed,
                        const std::string& context, ErrorCode code) {
  if (!object.is_object()) {
    throw Error(code, code == ErrorCode::kConfigInvalid ? "pipeline-cli" : kModule,
                context + " must be a JSON object");
  }
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) {
      throw Error(code, code == ErrorCode::kConfigInvalid ? "pipeline-cli" : kModule,
                  "unknown key '" + it.key() + "' in " + context);
    }
  }
}

json vector_to_value(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_value(const json& value) {
  if (!value.is_array()) corrupt("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) v[static_cast<Eigen::Index>(i)] = value[i].get<double>();
  return v;
}

json hyperparameters_to_value(const Hyperparameters& hp) {
  const auto& lr = hp.logistic_regression;
  const auto& nb = hp.naive_bayes;
  const auto& rf = hp.random_forest;
  const auto& sv = hp.svm;
  const auto& xg = hp.xgboost;
  return json{
      {"standardize", hp.standardize},
      {"seed", hp.seed},
      {"logistic_regression", {{"l2", lr.l2}, {"max_iter", lr.max_iter}, {"tol", lr.tol}}},
      {"naive_bayes", {{"var_floor", nb.var_floor}}},
      {"random_forest",
       {{"n_trees", rf.n_trees},
        {"max_depth", rf.max_depth},
        {"max_features", rf.max_features},
        {"bootstrap", rf.bootstrap},
        {"min_samples_split", rf.min_samples_split}}},
      {"svm", {{"c", sv.c}, {"gamma", sv.gamma}, {"tol", sv.tol}, {"max_iter", sv.max_iter}}},
      {"xgboost",
       {{"n_rounds", xg.n_rounds},
        {"max_depth", xg.max_depth},
        {"learning_rate", xg.learning_rate},
        {"lambda", xg.lambda},
        {"gamma", xg.gamma},
        {"min_child_weight", xg.min_child_weight}}},
  };
}

Hyperparameters hyperparameters_from_value(const json& value, ErrorCode code) {
  Hyperparameters hp;
  require_known_keys(value,
                     {"standardize", "seed", "logistic_regression", "naive_bayes",
                      "random_forest", "svm", "xgboost"},
                     "hyperparameters", code);
  auto get = [&](const json& obj, const char* key, auto& target) {
    if (obj.contains(key)) target = obj.at(key).get<std::decay_t<decltype(target)>>();
  };
  get(value, "standardize", hp.standardize);
  get(value, "seed", hp.seed);
  if (value.contains("logistic_regression")) {
    const json& o = value.at("logistic_regression");
    require_known_keys(o, {"l2", "max_iter", "tol"}, "logistic_regression", code);
    get(o, "l2", hp.logistic_regression.l2);
    get(o, "max_iter", hp.logistic_regression.max_iter);
    get(o, "tol", hp.logistic_regression.tol);
  }
  if (value.contains("naive_bayes")) {
    const json& o = value.at("naive_bayes");
    require_known_keys(o, {"var_floor"}, "naive_bayes", code);
    get(o, "var_floor", hp.naive_bayes.var_floor);
  }
  if (value.contains("random_forest")) {
    const json& o = value.at("random_forest");
    require_known_keys(o, {"n_trees", "max_depth", "max_features", "bootstrap", "min_samples_split"},
                       "random_forest", code);
    get(o, "n_trees", hp.random_forest.n_trees);
    get(o, "max_depth", hp.random_forest.max_depth);
    get(o, "max_features", hp.random_forest.max_features);
    get(o, "bootstrap", hp.random_forest.bootstrap);
    get(o, "min_samples_split", hp.random_forest.min_samples_split);
  }
  if (value.contains("svm")) {
    const json& o = value.at("svm");
    require_known_keys(o, {"c", "gamma", "tol", "max_iter"}, "svm", code);
    get(o, "c", hp.svm.c);
    get(o, "gamma", hp.svm.gamma);
    get(o, "tol", hp.svm.tol);
    get(o, "max_iter", hp.svm.max_iter);
  }
  if (value.contains("xgboost")) {
    const json& o = value.at("xgboost");
    require_known_keys(o, {"n_rounds", "max_depth", "learning_rate", "lambda", "gamma",
                           "min_child_weight"},
                       "xgboost", code);
    get(o, "n_rounds", hp.xgboost.n_rounds);
    get(o, "max_depth", hp.xgboost.max_depth);
    get(o, "learning_rate", hp.xgboost.learning_rate);
    get(o, "lambda", hp.xgboost.lambda);
    get(o, "gamma", hp.xgboost.gamma);
    get(o, "min_child_weight", hp.xgboost.min_child_weight);
  }
  return hp;
}

json model_to_value(const TrainedModel& model) {
  json params = std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LogisticModel>) {
          return {{"weights", vector_to_value(m.weights)}, {"intercept", m.intercept}};
        } else if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          return {{"means", matrix_to_value(m.means)},
                  {"variances", matrix_to_value(m.variances)},
                  {"log_prior", json::array({m.log_prior[0], m.log_prior[1]})}};
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          return {{"trees", trees_to_value(m.trees)}};
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          return {{"support_vectors", matrix_to_value(m.support_vectors)},
                  {"dual_coef", vector_to_value(m.dual_coef)},
                  {"bias", m.bias},
                  {"gamma", m.gamma}};
        } else {
          return {{"base_margin", m.base_margin},
                  {"learning_rate", m.learning_rate},
                  {"trees", trees_to_value(m.trees)},
                  {"training_loss", m.training_loss}};
        }
      },
      model.parameters);
  return json{{"format", "ieegdec-model/1"},
              {"kind", std::string(to_string(model.kind))},
              {"hyperparameters", hyperparameters_to_value(model.hyperparameters)},
              {"feature_mean", vector_to_value(model.feature_mean)},
              {"feature_scale", vector_to_value(model.feature_scale)},
              {"parameters", params}};
}

TrainedModel model_from_value(const json& value) {
  try {
    if (value.at("format").get<std::string>() != "ieegdec-model/1") corrupt("unsupported format");
    TrainedModel model;
    model.kind = classifier_kind_from_string(value.at("kind").get<std::string>());
    model.hyperparameters =
        hyperparameters_from_value(value.at("hyperparameters"), ErrorCode::kInvalidArgument);
    model.feature_mean = vector_from_value(value.at("feature_mean"));
    model.feature_scale = vector_from_value(value.at("feature_scale"));
    if (model.feature_mean.size() != model.feature_scale.size()) {
      corrupt("standardization vectors differ in length");
    }
    const json& p = value.at("parameters");
    switch (model.kind) {
      case ClassifierKind::kLogisticRegression:
        model.parameters =
            LogisticModel{vector_from_value(p.at("weights")), p.at("intercept").get<double>()};
        break;
      case ClassifierKind::kNaiveBayes: {
        NaiveBayesModel m;
        m.means = matrix_from_value(p.at("means"));
        m.variances = matrix_from_value(p.at("variances"));
        m.log_prior = {p.at("log_prior").at(0).get<double>(), p.at("log_prior").at(1).get<double>()};
        model.parameters = std::move(m);
        break;
      }
      case ClassifierKind::kRandomForest:
        model.parameters = ForestModel{trees_from_value(p.at("trees"))};
        break;
      case ClassifierKind::kSvm: {
        SvmModel m;
        m.support_vectors = matrix_from_value(p.at("support_vectors"));
        m.dual_coef = vector_from_value(p.at("dual_coef"));
        m.bias = p.at("bias").get<double>();
        m.gamma = p.at("gamma").get<double>();
        model.parameters = std::move(m);
        break;
      }
      case ClassifierKind::kXgboost: {
        BoostedModel m;
        m.base_margin = p.at("base_margin").get<double>();
        m.learning_rate = p.at("learning_rate").get<double>();
        m.trees = trees_from_value(p.at("trees"));
        m.training_loss = p.at("training_loss").get<std::vector<double>>();
        model.parameters = std::move(m);
        break;
      }
    }
    return model;
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
}

std::string dump_fixed_precision(const json& value, int indent) {
  std::ostringstream out;
  write_value(out, value, indent, 0);
  return out.str();
}

}  // namespace ieegdec::codec

namespace ieegdec {

std::string model_to_json(const TrainedModel& model) {
  return codec::model_to_value(model).dump();
}

TrainedModel model_from_json(std::string_view text) {
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, "classifiers",
                std::string("model document is not valid JSON: ") + e.what());
  }
  return codec::model_from_value(value);
}

}  // namespace ieegdec
