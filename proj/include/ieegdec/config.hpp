#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ieegdec/evaluation.hpp"

namespace ieegdec {

// Run configuration for `evaluate`. Class names are resolved against the
// container's label set at run time. JSON layout (every key optional):
//
//   { "task": { "positive_class": "task", "negative_class": "rest",
//               "alignment": "onset" | "centered", "window_seconds": 2.0 },
//     "feature_input": "envelope" | "gamma_band",
//     "classifier": { "kind": "random_forest", "hyperparameters": { ... } },
//     "split": { "n_folds": 5, "train_frac": 0.64, "val_frac": 0.16,
//                "test_frac": 0.2, "stratified": true },
//     "resampling": { "enabled": true, "k_neighbors": 5 },
//     "ensemble": { "max_channels": 0, "exhaustive_oracle": false },
//     "seed": 0,
//     "output_dir": "runs/p01" }
//
// The published schema lives in docs/run_config.schema.json.
struct RunConfig {
  EvaluationConfig evaluation;
  std::optional<std::string> positive_class;
  std::optional<std::string> negative_class;
  std::optional<std::string> output_dir;

  // Throws Error(kConfigInvalid).
  void validate() const;
};

RunConfig run_config_from_json(std::string_view text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

// Maps class names to codes in `labels`; throws Error(kConfigInvalid) for
// names outside the label set.
TaskDefinition resolve_task(const RunConfig& config, const std::vector<std::string>& labels);

std::string_view to_string(Alignment alignment);
std::string_view to_string(FeatureInput input);
Alignment alignment_from_string(std::string_view text);
FeatureInput feature_input_from_string(std::string_view text);

}  // namespace ieegdec
