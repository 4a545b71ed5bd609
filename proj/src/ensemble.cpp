#include "ieegdec/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ieegdec/error.hpp"
#include "ieegdec/metrics.hpp"
#include "json_codec.hpp"

namespace ieegdec {
namespace {

constexpr const char* kModule = "ensemble";

// Binary votes relative to the positive class (1 = predicts positive).
struct MemberOutputs {
  Eigen::Index channel_index = 0;
  double validation_f1 = 0.0;
  std::vector<int> votes;
  Eigen::VectorXd scores;
};

std::vector<std::size_t> sorted_by_channel(const std::vector<ChannelModel>& models) {
  std::vector<std::size_t> order(models.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return models[a].channel_index < models[b].channel_index;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (models[order[i]].channel_index == models[order[i - 1]].channel_index) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "duplicate channel index " + std::to_string(models[order[i]].channel_index));
    }
  }
  return order;
}

const Eigen::MatrixXd& channel_rows(const std::vector<Eigen::MatrixXd>& per_channel,
                                    Eigen::Index channel) {
  if (channel < 0 || channel >= static_cast<Eigen::Index>(per_channel.size()) ||
      per_channel[static_cast<std::size_t>(channel)].size() == 0) {
    throw Error(ErrorCode::kMissingChannel, kModule,
                "missing features for channel indices [" + std::to_string(channel) + "]");
  }
  return per_channel[static_cast<std::size_t>(channel)];
}

MemberOutputs evaluate_member(const ChannelModel& cm, const ChannelFeatures& data) {
  MemberOutputs out;
  out.channel_index = cm.channel_index;
  out.validation_f1 = cm.validation_f1;
  const Eigen::MatrixXd& rows = channel_rows(data.per_channel, cm.channel_index);
  if (static_cast<std::size_t>(rows.rows()) != data.labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, kModule, "validation rows and labels differ in length");
  }
  out.scores = predict_score(cm.model, rows);
  out.votes.resize(static_cast<std::size_t>(out.scores.size()));
  for (Eigen::Index i = 0; i < out.scores.size(); ++i) {
    out.votes[static_cast<std::size_t>(i)] = out.scores[i] > 0.5 ? 1 : 0;
  }
  return out;
}

// Model labels are 0/1 with 1 the positive class; map them onto the split's codes.
std::vector<int> to_binary(const std::vector<int>& labels, int positive_class) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == positive_class ? 1 : 0;
  return out;
}

double subset_f1(const std::vector<MemberOutputs>& outputs, const std::vector<std::size_t>& members,
                 const std::vector<int>& truth) {
  const auto n = static_cast<Eigen::Index>(truth.size());
  const auto m = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXi votes(n, m);
  Eigen::MatrixXd scores(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const MemberOutputs& o = outputs[members[static_cast<std::size_t>(c)]];
    for (Eigen::Index r = 0; r < n; ++r) votes(r, c) = o.votes[static_cast<std::size_t>(r)];
    scores.col(c) = o.scores;
  }
  return f1_score(truth, majority_vote(votes, scores), 1);
}

}  // namespace

const ChannelModel& best_channel(const std::vector<ChannelModel>& channel_models) {
  if (channel_models.empty()) throw Error(ErrorCode::kEmpty, kModule, "no channel models");
  const ChannelModel* best = &channel_models.front();
  for (const ChannelModel& cm : channel_models) {
    if (cm.validation_f1 > best->validation_f1 ||
        (cm.validation_f1 == best->validation_f1 && cm.channel_index < best->channel_index)) {
      best = &cm;
    }
  }
  return *best;
}

std::vector<int> majority_vote(const Eigen::MatrixXi& votes, const Eigen::MatrixXd& scores) {
  if (votes.cols() < 1) throw Error(ErrorCode::kEmpty, kModule, "majority vote needs a member");
  if (votes.rows() != scores.rows() || votes.cols() != scores.cols()) {
    throw Error(ErrorCode::kShapeMismatch, kModule, "votes and scores differ in shape");
  }
  std::vector<int> out(static_cast<std::size_t>(votes.rows()));
  for (Eigen::Index r = 0; r < votes.rows(); ++r) {
    Eigen::Index ones = 0;
    double score_ones = 0.0, score_zeros = 0.0;
    for (Eigen::Index c = 0; c < votes.cols(); ++c) {
      if (votes(r, c) == 1) {
        ++ones;
        score_ones += scores(r, c);
      } else {
        score_zeros += scores(r, c);
      }
    }
    const Eigen::Index zeros = votes.cols() - ones;
    int label;
    if (ones != zeros) {
      label = ones > zeros ? 1 : 0;
    } else {
      const double conf_ones = std::abs(score_ones / static_cast<double>(ones) - 0.5);
      const double conf_zeros = std::abs(score_zeros / static_cast<double>(zeros) - 0.5);
      if (conf_ones != conf_zeros) {
        label = conf_ones > conf_zeros ? 1 : 0;
      } else {
        label = votes(r, 0) == 1 ? 1 : 0;
      }
    }
    out[static_cast<std::size_t>(r)] = label;
  }
  return out;
}

EnsembleModel greedy_select(const std::vector<ChannelModel>& channel_models,
                            const ChannelFeatures& validation, const GreedyOptions& options) {
  if (channel_models.empty()) throw Error(ErrorCode::kEmpty, kModule, "no channel models");
  const std::vector<std::size_t> order = sorted_by_channel(channel_models);
  const std::vector<int> truth = to_binary(validation.labels, validation.positive_class);

  std::vector<MemberOutputs> outputs;
  outputs.reserve(order.size());
  for (std::size_t idx : order) outputs.push_back(evaluate_member(channel_models[idx], validation));

  const ChannelModel& first = best_channel(channel_models);
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i].channel_index == first.channel_index) current.push_back(i);
  }
  std::vector<bool> used(outputs.size(), false);
  used[current.front()] = true;

  EnsembleModel ensemble;
  double current_f1 = subset_f1(outputs, current, truth);
  ensemble.history.push_back(current_f1);

  while (options.max_channels <= 0 ||
         static_cast<int>(current.size()) < options.max_channels) {
    double best_f1 = -std::numeric_limits<double>::infinity();
    std::size_t best_candidate = outputs.size();
    // Candidates are scanned in channel order, so strict '>' keeps the lowest index on ties.
    for (std::size_t cand = 0; cand < outputs.size(); ++cand) {
      if (used[cand]) continue;
      current.push_back(cand);
      const double f1 = subset_f1(outputs, current, truth);
      current.pop_back();
      if (f1 > best_f1) {
        best_f1 = f1;
        best_candidate = cand;
      }
    }
    if (best_candidate == outputs.size() || !(best_f1 > current_f1)) break;
    current.push_back(best_candidate);
    used[best_candidate] = true;
    current_f1 = best_f1;
    ensemble.history.push_back(current_f1);
  }

  for (std::size_t i : current) {
    const ChannelModel& cm = channel_models[order[i]];
    ensemble.selected.push_back(cm.channel_index);
    ensemble.members.push_back(cm);
  }
  return ensemble;
}

SubsetSearchResult exhaustive_select(const std::vector<ChannelModel>& channel_models,
                                     const ChannelFeatures& validation) {
  if (channel_models.empty()) throw Error(ErrorCode::kEmpty, kModule, "no channel models");
  if (channel_models.size() > 12) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "exhaustive subset search is limited to 12 channels");
  }
  const std::vector<std::size_t> order = sorted_by_channel(channel_models);
  const std::vector<int> truth = to_binary(validation.labels, validation.positive_class);
  std::vector<MemberOutputs> outputs;
  for (std::size_t idx : order) outputs.push_back(evaluate_member(channel_models[idx], validation));

  SubsetSearchResult best;
  best.f1 = -1.0;
  const std::size_t n = outputs.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    // Subset's best single channel leads; ties by lowest channel index.
    auto lead = members.begin();
    for (auto it = members.begin(); it != members.end(); ++it) {
      if (outputs[*it].validation_f1 > outputs[*lead].validation_f1) lead = it;
    }
    std::rotate(members.begin(), lead, lead + 1);
    const double f1 = subset_f1(outputs, members, truth);
    if (f1 > best.f1) {
      best.f1 = f1;
      best.channels.clear();
      for (std::size_t i : members) best.channels.push_back(outputs[i].channel_index);
    }
  }
  return best;
}

std::vector<int> predict_ensemble(const EnsembleModel& ensemble,
                                  const std::vector<Eigen::MatrixXd>& features_per_channel) {
  if (ensemble.members.empty()) throw Error(ErrorCode::kEmpty, kModule, "ensemble has no members");
  std::vector<Eigen::Index> missing;
  for (const ChannelModel& cm : ensemble.members) {
    const auto c = cm.channel_index;
    if (c < 0 || c >= static_cast<Eigen::Index>(features_per_channel.size()) ||
        features_per_channel[static_cast<std::size_t>(c)].size() == 0) {
      missing.push_back(c);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      list += (i ? "," : "") + std::to_string(missing[i]);
    }
    throw Error(ErrorCode::kMissingChannel, kModule, "missing features for channel indices [" + list + "]");
  }

  const Eigen::Index n = features_per_channel[static_cast<std::size_t>(ensemble.members.front().channel_index)].rows();
  const auto m = static_cast<Eigen::Index>(ensemble.members.size());
  Eigen::MatrixXi votes(n, m);
  Eigen::MatrixXd scores(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const ChannelModel& cm = ensemble.members[static_cast<std::size_t>(c)];
    const Eigen::MatrixXd& rows = features_per_channel[static_cast<std::size_t>(cm.channel_index)];
    if (rows.rows() != n) {
      throw Error(ErrorCode::kShapeMismatch, kModule, "channels disagree on the number of rows");
    }
    scores.col(c) = predict_score(cm.model, rows);
    for (Eigen::Index r = 0; r < n; ++r) votes(r, c) = scores(r, c) > 0.5 ? 1 : 0;
  }
  return majority_vote(votes, scores);
}

std::string ensemble_to_json(const EnsembleModel& ensemble) {
  nlohmann::json members = nlohmann::json::array();
  for (const ChannelModel& cm : ensemble.members) {
    members.push_back({{"channel_index", cm.channel_index},
                       {"validation_f1", cm.validation_f1},
                       {"model", codec::model_to_value(cm.model)}});
  }
  nlohmann::json doc{{"format", "ieegdec-ensemble/1"},
                     {"selected", ensemble.selected},
                     {"history", ensemble.history},
                     {"members", members}};
  return doc.dump();
}

EnsembleModel ensemble_from_json(std::string_view text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != "ieegdec-ensemble/1") {
      throw Error(ErrorCode::kInvalidArgument, kModule, "unsupported ensemble format");
    }
    EnsembleModel e;
    e.selected = doc.at("selected").get<std::vector<Eigen::Index>>();
    e.history = doc.at("history").get<std::vector<double>>();
    for (const auto& m : doc.at("members")) {
      e.members.push_back(ChannelModel{m.at("channel_index").get<Eigen::Index>(),
                                       codec::model_from_value(m.at("model")),
                                       m.at("validation_f1").get<double>()});
    }
    if (e.members.size() != e.selected.size()) {
      throw Error(ErrorCode::kInvalidArgument, kModule, "ensemble members and selection differ");
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidArgument, kModule, std::string("ensemble document: ") + ex.what());
  }
}

}  // namespace ieegdec
