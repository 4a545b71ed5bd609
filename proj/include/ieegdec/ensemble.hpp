#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ieegdec/classifiers.hpp"

namespace ieegdec {

struct ChannelModel {
  Eigen::Index channel_index = 0;
  TrainedModel model;
  double validation_f1 = 0.0;
};

struct EnsembleModel {
  std::vector<Eigen::Index> selected;  // selection order
  std::vector<ChannelModel> members;   // parallel to `selected`
  std::vector<double> history;         // validation F1 after each accepted step
};

// Feature rows for one split, indexed by channel index. A channel that is not
// available has an empty matrix.
struct ChannelFeatures {
  std::vector<Eigen::MatrixXd> per_channel;
  std::vector<int> labels;
  int positive_class = 1;
};

struct GreedyOptions {
  int max_channels = 0;  // <= 0: no cap
};

// Highest validation F1; ties go to the lowest channel index.
const ChannelModel& best_channel(const std::vector<ChannelModel>& channel_models);

// Per-row majority over members (columns). On an exact tie the side whose
// members' mean score is farther from 0.5 wins; if still tied, column 0 decides.
std::vector<int> majority_vote(const Eigen::MatrixXi& votes, const Eigen::MatrixXd& scores);

// Greedy forward selection: start from best_channel, repeatedly add the single
// channel giving the highest ensemble validation F1, stop when no addition is
// a strict improvement.
EnsembleModel greedy_select(const std::vector<ChannelModel>& channel_models,
                            const ChannelFeatures& validation, const GreedyOptions& options = {});

struct SubsetSearchResult {
  std::vector<Eigen::Index> channels;
  double f1 = 0.0;
};

// Exhaustive search over every non-empty subset (at most 12 channels). Members
// are voted with the subset's best single channel in column 0, matching the
// order greedy_select produces.
SubsetSearchResult exhaustive_select(const std::vector<ChannelModel>& channel_models,
                                     const ChannelFeatures& validation);

std::vector<int> predict_ensemble(const EnsembleModel& ensemble,
                                  const std::vector<Eigen::MatrixXd>& features_per_channel);

std::string ensemble_to_json(const EnsembleModel& ensemble);
EnsembleModel ensemble_from_json(std::string_view text);

}  // namespace ieegdec
