#include "ieegdec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ieegdec/error.hpp"
#include "json_codec.hpp"

namespace ieegdec {
namespace {

using nlohmann::json;
constexpr const char* kModule = "pipeline-cli";

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kConfigInvalid, kModule, message);
}

const json& section(const json& root, const char* key, std::initializer_list<const char*> allowed) {
  static const json kEmpty = json::object();
  if (!root.contains(key)) return kEmpty;
  const json& s = root.at(key);
  if (!s.is_object()) invalid(std::string("'") + key + "' must be an object");
  codec::require_known_keys(s, allowed, key, ErrorCode::kConfigInvalid);
  return s;
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) invalid(std::string("'") + key + "' must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) invalid(std::string("'") + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_integer() && !v.is_number_unsigned()) {
        invalid(std::string("'") + key + "' must be non-negative");
      }
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) invalid(std::string("'") + key + "' must be a number");
  } else {
    if (!v.is_string()) invalid(std::string("'") + key + "' must be a string");
  }
  target = v.get<T>();
}

}  // namespace

std::string_view to_string(Alignment alignment) {
  return alignment == Alignment::kOnset ? "onset" : "centered";
}

std::string_view to_string(FeatureInput input) {
  return input == FeatureInput::kEnvelope ? "envelope" : "gamma_band";
}

Alignment alignment_from_string(std::string_view text) {
  if (text == "onset") return Alignment::kOnset;
  if (text == "centered") return Alignment::kCentered;
  invalid("alignment must be \"onset\" or \"centered\", got \"" + std::string(text) + "\"");
}

FeatureInput feature_input_from_string(std::string_view text) {
  if (text == "envelope") return FeatureInput::kEnvelope;
  if (text == "gamma_band") return FeatureInput::kGammaBand;
  invalid("feature_input must be \"envelope\" or \"gamma_band\", got \"" + std::string(text) + "\"");
}

void RunConfig::validate() const {
  const EvaluationConfig& e = evaluation;
  if (!(e.task.window_seconds > 0.0) || !std::isfinite(e.task.window_seconds)) {
    invalid("task.window_seconds must be positive");
  }
  if (positive_class && negative_class && *positive_class == *negative_class) {
    invalid("task.positive_class and task.negative_class must differ");
  }
  if (e.k_neighbors < 1) invalid("resampling.k_neighbors must be >= 1");
  if (e.greedy.max_channels < 0) invalid("ensemble.max_channels must be >= 0");
  try {
    e.split.validate();
    e.hyperparameters.validate();
  } catch (const Error& err) {
    invalid(err.what());
  }
}

RunConfig run_config_from_json(std::string_view source) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::exception& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) invalid("config must be a JSON object");
  codec::require_known_keys(root,
                            {"task", "feature_input", "classifier", "split", "resampling",
                             "ensemble", "seed", "output_dir"},
                            "config", ErrorCode::kConfigInvalid);

  RunConfig c;
  EvaluationConfig& e = c.evaluation;

  const json& task = section(root, "task", {"positive_class", "negative_class", "alignment", "window_seconds"});
  std::string text;
  if (task.contains("positive_class")) {
    read(task, "positive_class", text);
    c.positive_class = text;
  }
  if (task.contains("negative_class")) {
    read(task, "negative_class", text);
    c.negative_class = text;
  }
  if (task.contains("alignment")) {
    read(task, "alignment", text);
    e.task.alignment = alignment_from_string(text);
  }
  read(task, "window_seconds", e.task.window_seconds);
  if (root.contains("feature_input")) {
    read(root, "feature_input", text);
    e.task.feature_input = feature_input_from_string(text);
  }

  const json& clf = section(root, "classifier", {"kind", "hyperparameters"});
  if (clf.contains("kind")) {
    read(clf, "kind", text);
    try {
      e.kind = classifier_kind_from_string(text);
    } catch (const Error& err) {
      invalid(err.what());
    }
  }
  if (clf.contains("hyperparameters")) {
    const json& hp = clf.at("hyperparameters");
    if (!hp.is_object()) invalid("'classifier.hyperparameters' must be an object");
    if (hp.contains("seed")) invalid("classifier.hyperparameters.seed is not accepted; use the top-level seed");
    try {
      e.hyperparameters = codec::hyperparameters_from_value(hp, ErrorCode::kConfigInvalid);
    } catch (const json::exception& err) {
      invalid(std::string("classifier.hyperparameters: ") + err.what());
    }
  }

  const json& split = section(root, "split", {"n_folds", "train_frac", "val_frac", "test_frac", "stratified"});
  read(split, "n_folds", e.split.n_folds);
  read(split, "train_frac", e.split.train_frac);
  read(split, "val_frac", e.split.val_frac);
  read(split, "test_frac", e.split.test_frac);
  read(split, "stratified", e.split.stratified);

  const json& rs = section(root, "resampling", {"enabled", "k_neighbors"});
  read(rs, "enabled", e.resample);
  read(rs, "k_neighbors", e.k_neighbors);

  const json& ens = section(root, "ensemble", {"max_channels", "exhaustive_oracle"});
  read(ens, "max_channels", e.greedy.max_channels);
  read(ens, "exhaustive_oracle", e.exhaustive_oracle);

  read(root, "seed", e.seed);
  if (root.contains("output_dir")) {
    read(root, "output_dir", text);
    c.output_dir = text;
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return run_config_from_json(buffer.str());
}

std::string run_config_to_json(const RunConfig& c) {
  const EvaluationConfig& e = c.evaluation;
  json task{{"alignment", to_string(e.task.alignment)}, {"window_seconds", e.task.window_seconds}};
  if (c.positive_class) task["positive_class"] = *c.positive_class;
  if (c.negative_class) task["negative_class"] = *c.negative_class;
  json hp = codec::hyperparameters_to_value(e.hyperparameters);
  hp.erase("seed");
  json root{{"task", task},
            {"feature_input", to_string(e.task.feature_input)},
            {"classifier", {{"kind", to_string(e.kind)}, {"hyperparameters", hp}}},
            {"split",
             {{"n_folds", e.split.n_folds},
              {"train_frac", e.split.train_frac},
              {"val_frac", e.split.val_frac},
              {"test_frac", e.split.test_frac},
              {"stratified", e.split.stratified}}},
            {"resampling", {{"enabled", e.resample}, {"k_neighbors", e.k_neighbors}}},
            {"ensemble", {{"max_channels", e.greedy.max_channels}, {"exhaustive_oracle", e.exhaustive_oracle}}},
            {"seed", e.seed}};
  if (c.output_dir) root["output_dir"] = *c.output_dir;
  return codec::dump_fixed_precision(root);
}

TaskDefinition resolve_task(const RunConfig& config, const std::vector<std::string>& labels) {
  TaskDefinition task = config.evaluation.task;
  auto code_of = [&](const std::string& name, const char* field) {
    const auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) {
      invalid(std::string("task.") + field + " '" + name + "' is not a label of this container");
    }
    return static_cast<int>(it - labels.begin());
  };
  if (config.positive_class) task.positive_class = code_of(*config.positive_class, "positive_class");
  if (config.negative_class) task.negative_class = code_of(*config.negative_class, "negative_class");
  return task;
}

}  // namespace ieegdec
