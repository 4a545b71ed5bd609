#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ieegdec/classifiers.hpp"
#include "ieegdec/ensemble.hpp"
#include "ieegdec/features.hpp"
#include "ieegdec/metrics.hpp"
#include "ieegdec/resampling.hpp"
#include "ieegdec/signal.hpp"

namespace ieegdec {

struct SplitPlan {
  int n_folds = 5;
  double train_frac = 0.64;
  double val_frac = 0.16;
  double test_frac = 0.20;
  bool stratified = true;
  std::uint64_t seed = 0;

  // Fractions must sum to 1 and test_frac must equal 1 / n_folds (the test
  // sets partition the trials).
  void validate() const;
};

struct Fold {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> validation;
  std::vector<Eigen::Index> test;
};

// Stratified k-fold with an inner train/validation split. Per class, test
// sizes differ by at most one (extra trials rotate across folds from class to
// class) and the remaining trials are split train/validation by
// largest-remainder rounding. Index lists are sorted ascending.
std::vector<Fold> make_folds(const std::vector<int>& labels, const SplitPlan& plan);

enum class Mode { kBestChannel, kCombined };
std::string_view to_string(Mode mode);

struct FoldReport {
  int fold_index = 0;
  Mode mode = Mode::kBestChannel;
  ConfusionCounts confusion;
  Metrics metrics;
  std::vector<Eigen::Index> selected_channels;
  std::vector<double> per_channel_validation_f1;  // indexed by channel
  std::vector<double> validation_history;         // greedy history (combined mode)
  std::optional<double> exhaustive_validation_f1;
};

struct ModeSummary {
  double f1_mean = 0.0;
  double f1_sd = 0.0;  // population standard deviation across folds
  double precision_mean = 0.0;
  double recall_mean = 0.0;
  std::vector<double> fold_f1;
};

struct ParticipantReport {
  std::string participant_id;
  ClassifierKind kind = ClassifierKind::kLogisticRegression;
  int positive_class = 1;
  std::vector<FoldReport> folds;  // per fold: best_channel then combined
  ModeSummary best_channel;
  ModeSummary combined;

  const ModeSummary& summary(Mode mode) const {
    return mode == Mode::kBestChannel ? best_channel : combined;
  }
};

struct TaskDefinition {
  std::optional<int> positive_class;  // default: minority class (ties: higher code)
  std::optional<int> negative_class;  // default: every non-positive label
  Alignment alignment = Alignment::kOnset;
  double window_seconds = 2.0;
  FeatureInput feature_input = FeatureInput::kEnvelope;
};

struct EvaluationConfig {
  TaskDefinition task;
  ClassifierKind kind = ClassifierKind::kRandomForest;
  Hyperparameters hyperparameters;
  SplitPlan split;
  bool resample = true;
  int k_neighbors = 5;
  GreedyOptions greedy;
  bool exhaustive_oracle = false;
  std::uint64_t seed = 0;
};

// FNV-1a of the participant id; mixed into every derived seed.
std::uint64_t participant_hash(const std::string& id);

// Split plan (with its derived seed) used for this participant.
SplitPlan split_plan_for(const EvaluationConfig& config, const std::string& participant_id);

ModeSummary summarize(const std::vector<FoldReport>& folds, Mode mode);

// Two-mode protocol on precomputed features. `labels` are binary (1 = positive).
ParticipantReport evaluate_features(const std::vector<FeatureMatrix>& per_channel,
                                    const std::vector<int>& labels,
                                    const EvaluationConfig& config,
                                    const std::string& participant_id = "");

// Segment, extract features, then run evaluate_features.
ParticipantReport evaluate_participant(const Recording& recording, const EventList& events,
                                       const EvaluationConfig& config);

// Resolve the positive class for a label sequence under `task`.
int resolve_positive_class(const std::vector<int>& labels, const TaskDefinition& task);

// Events kept for the binary task and their 0/1 labels.
struct BinaryTask {
  EventList events;
  std::vector<int> labels;
  int positive_class = 1;
};
BinaryTask make_binary_task(const EventList& events, const TaskDefinition& task);

std::vector<FeatureMatrix> extract_all_features(const Recording& recording,
                                                const EventList& events,
                                                const TaskDefinition& task);

struct ParticipantSelection {
  std::string participant_id;
  std::vector<Eigen::Index> selected_channels;
  std::vector<ChannelMeta> channels;
};

// Union of the combined-mode selections across folds.
ParticipantSelection selection_from_report(const ParticipantReport& report,
                                           const std::vector<ChannelMeta>& channels);

struct RegionCount {
  std::string region;
  int participant_recurrence = 0;
  int channel_count = 0;
};

// Rows sorted by participant recurrence, then channel count (both descending),
// then region name.
struct RegionHistogram {
  std::vector<RegionCount> rows;
};

inline constexpr const char* kUnlabeledRegion = "unlabeled";

RegionHistogram region_contributions(const std::vector<ParticipantSelection>& participants);

void write_region_csv(std::ostream& out, const RegionHistogram& histogram);

}  // namespace ieegdec
