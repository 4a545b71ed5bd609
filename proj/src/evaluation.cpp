#include "ieegdec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "ieegdec/error.hpp"
#include "ieegdec/rng.hpp"

namespace ieegdec {
namespace {

constexpr const char* kModule = "evaluation";

enum SeedTag : std::uint64_t { kFoldSeed = 1, kFitSeed = 2, kSmoteSeed = 3 };

// Largest-remainder apportionment of `total` over `shares`; ties go to the
// earlier share.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& shares) {
  std::vector<std::size_t> parts(shares.size());
  std::vector<double> remainder(shares.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const double quota = static_cast<double>(total) * shares[i];
    parts[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainder[i] = quota - static_cast<double>(parts[i]);
    assigned += parts[i];
  }
  while (assigned < total) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < shares.size(); ++i) {
      if (remainder[i] > remainder[best] + 1e-12) best = i;
    }
    ++parts[best];
    remainder[best] -= 1.0;
    ++assigned;
  }
  return parts;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
  return m(rows, Eigen::all);
}

std::vector<int> take(const std::vector<int>& v, const std::vector<Eigen::Index>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(v[static_cast<std::size_t>(r)]);
  return out;
}

FoldReport make_report(int fold, Mode mode, const std::vector<int>& truth,
                       const std::vector<int>& predicted) {
  FoldReport r;
  r.fold_index = fold;
  r.mode = mode;
  r.confusion = confusion(truth, predicted, 1);
  r.metrics = precision_recall_f1(r.confusion);
  return r;
}

}  // namespace

std::uint64_t participant_hash(const std::string& id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : id) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SplitPlan split_plan_for(const EvaluationConfig& config, const std::string& participant_id) {
  SplitPlan plan = config.split;
  plan.seed = derive_seed(config.seed, {participant_hash(participant_id), kFoldSeed});
  return plan;
}

void SplitPlan::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, kModule, m); };
  if (n_folds < 2) bad("n_folds must be >= 2");
  if (!(train_frac > 0.0) || !(val_frac >= 0.0) || !(test_frac > 0.0)) {
    bad("split fractions must be positive");
  }
  if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) bad("split fractions must sum to 1");
  if (std::abs(test_frac - 1.0 / n_folds) > 1e-9) bad("test_frac must equal 1 / n_folds");
}

std::vector<Fold> make_folds(const std::vector<int>& labels, const SplitPlan& plan) {
  plan.validate();
  const auto k = static_cast<std::size_t>(plan.n_folds);

  std::map<int, std::vector<Eigen::Index>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    groups[plan.stratified ? labels[i] : 0].push_back(static_cast<Eigen::Index>(i));
  }
  if (groups.empty()) throw Error(ErrorCode::kTooFewTrials, kModule, "no trials to split");
  for (const auto& [label, idx] : groups) {
    if (idx.size() < k) {
      throw Error(ErrorCode::kTooFewTrials, kModule,
                  "class " + std::to_string(label) + " has " + std::to_string(idx.size()) +
                      " trials, fewer than n_folds=" + std::to_string(k));
    }
  }

  const double inner = plan.train_frac + plan.val_frac;
  const std::vector<double> inner_shares{plan.train_frac / inner, plan.val_frac / inner};

  Rng rng(plan.seed);
  std::vector<Fold> folds(k);
  std::size_t offset = 0;
  for (auto& [label, idx] : groups) {
    rng.shuffle(idx);
    const std::size_t base = idx.size() / k;
    const std::size_t extra = idx.size() % k;
    std::vector<std::size_t> begin(k + 1, 0);
    for (std::size_t f = 0; f < k; ++f) {
      const bool gets_extra = ((f + k - offset) % k) < extra;
      begin[f + 1] = begin[f] + base + (gets_extra ? 1 : 0);
    }
    offset = (offset + extra) % k;

    for (std::size_t f = 0; f < k; ++f) {
      std::vector<Eigen::Index> rest;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i >= begin[f] && i < begin[f + 1]) {
          folds[f].test.push_back(idx[i]);
        } else {
          rest.push_back(idx[i]);
        }
      }
      const auto parts = apportion(rest.size(), inner_shares);
      for (std::size_t i = 0; i < rest.size(); ++i) {
        (i < parts[1] ? folds[f].validation : folds[f].train).push_back(rest[i]);
      }
    }
  }
  for (Fold& f : folds) {
    std::sort(f.train.begin(), f.train.end());
    std::sort(f.validation.begin(), f.validation.end());
    std::sort(f.test.begin(), f.test.end());
  }
  return folds;
}

std::string_view to_string(Mode mode) {
  return mode == Mode::kBestChannel ? "best_channel" : "combined";
}

ModeSummary summarize(const std::vector<FoldReport>& folds, Mode mode) {
  ModeSummary s;
  for (const FoldReport& f : folds) {
    if (f.mode != mode) continue;
    s.fold_f1.push_back(f.metrics.f1);
    s.precision_mean += f.metrics.precision;
    s.recall_mean += f.metrics.recall;
  }
  if (s.fold_f1.empty()) return s;
  const double n = static_cast<double>(s.fold_f1.size());
  for (double v : s.fold_f1) s.f1_mean += v;
  s.f1_mean /= n;
  s.precision_mean /= n;
  s.recall_mean /= n;
  double ss = 0.0;
  for (double v : s.fold_f1) ss += (v - s.f1_mean) * (v - s.f1_mean);
  s.f1_sd = std::sqrt(ss / n);
  return s;
}

ParticipantReport evaluate_features(const std::vector<FeatureMatrix>& per_channel,
                                    const std::vector<int>& labels,
                                    const EvaluationConfig& config,
                                    const std::string& participant_id) {
  if (per_channel.empty()) throw Error(ErrorCode::kEmpty, kModule, "no channels to evaluate");
  for (const FeatureMatrix& fm : per_channel) {
    if (static_cast<std::size_t>(fm.rows.rows()) != labels.size()) {
      throw Error(ErrorCode::kShapeMismatch, kModule,
                  "channel " + std::to_string(fm.channel_index) + " has " +
                      std::to_string(fm.rows.rows()) + " rows for " +
                      std::to_string(labels.size()) + " labels");
    }
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw Error(ErrorCode::kInvalidArgument, kModule, "labels must be 0 or 1");
  }

  const std::uint64_t pid = participant_hash(participant_id);
  const std::vector<Fold> folds = make_folds(labels, split_plan_for(config, participant_id));

  Eigen::Index max_channel = 0;
  for (const FeatureMatrix& fm : per_channel) max_channel = std::max(max_channel, fm.channel_index);
  const auto n_slots = static_cast<std::size_t>(max_channel + 1);

  ParticipantReport report;
  report.participant_id = participant_id;
  report.kind = config.kind;

  for (std::size_t f = 0; f < folds.size(); ++f) {
    const Fold& fold = folds[f];
    const std::vector<int> y_train = take(labels, fold.train);
    const std::vector<int> y_val = take(labels, fold.validation);
    const std::vector<int> y_test = take(labels, fold.test);
    const bool imbalanced =
        std::count(y_train.begin(), y_train.end(), 1) * 2 != static_cast<std::ptrdiff_t>(y_train.size());

    ChannelFeatures validation{std::vector<Eigen::MatrixXd>(n_slots), y_val, 1};
    std::vector<Eigen::MatrixXd> test_rows(n_slots);
    std::vector<ChannelModel> models;
    std::vector<double> per_channel_f1(n_slots, 0.0);

    for (const FeatureMatrix& fm : per_channel) {
      const auto ch = static_cast<std::uint64_t>(fm.channel_index);
      Eigen::MatrixXd x_train = take_rows(fm.rows, fold.train);
      std::vector<int> y_fit = y_train;
      if (config.resample && imbalanced) {
        ResamplePlan rp{config.k_neighbors, derive_seed(config.seed, {pid, kSmoteSeed, f, ch})};
        SmoteResult balanced = smote(x_train, y_train, rp);
        x_train = std::move(balanced.x);
        y_fit = std::move(balanced.y);
      }
      Hyperparameters hp = config.hyperparameters;
      hp.seed = derive_seed(config.seed, {pid, kFitSeed, f, ch});
      ChannelModel cm{fm.channel_index, fit(config.kind, x_train, y_fit, hp), 0.0};

      const auto slot = static_cast<std::size_t>(fm.channel_index);
      validation.per_channel[slot] = take_rows(fm.rows, fold.validation);
      test_rows[slot] = take_rows(fm.rows, fold.test);
      cm.validation_f1 = f1_score(y_val, predict(cm.model, validation.per_channel[slot]), 1);
      per_channel_f1[slot] = cm.validation_f1;
      models.push_back(std::move(cm));
    }

    const ChannelModel& best = best_channel(models);
    FoldReport best_report = make_report(static_cast<int>(f), Mode::kBestChannel, y_test,
                                         predict(best.model, test_rows[static_cast<std::size_t>(best.channel_index)]));
    best_report.selected_channels = {best.channel_index};
    best_report.per_channel_validation_f1 = per_channel_f1;
    best_report.validation_history = {best.validation_f1};

    const EnsembleModel ensemble = greedy_select(models, validation, config.greedy);
    FoldReport combined_report = make_report(static_cast<int>(f), Mode::kCombined, y_test,
                                             predict_ensemble(ensemble, test_rows));
    combined_report.selected_channels = ensemble.selected;
    combined_report.per_channel_validation_f1 = per_channel_f1;
    combined_report.validation_history = ensemble.history;
    if (config.exhaustive_oracle && models.size() <= 12) {
      combined_report.exhaustive_validation_f1 = exhaustive_select(models, validation).f1;
    }

    report.folds.push_back(std::move(best_report));
    report.folds.push_back(std::move(combined_report));
  }
  report.best_channel = summarize(report.folds, Mode::kBestChannel);
  report.combined = summarize(report.folds, Mode::kCombined);
  return report;
}

int resolve_positive_class(const std::vector<int>& labels, const TaskDefinition& task) {
  if (task.positive_class) return *task.positive_class;
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  if (task.negative_class) counts.erase(*task.negative_class);
  if (task.negative_class && counts.size() == 1) return counts.begin()->first;
  if (counts.size() != 2 || task.negative_class) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "positive class must be given explicitly unless exactly two labels are present");
  }
  const auto a = counts.begin();
  const auto b = std::next(a);
  return a->second < b->second ? a->first : b->first;
}

BinaryTask make_binary_task(const EventList& events, const TaskDefinition& task) {
  std::vector<int> raw;
  for (const Event& e : events.events) raw.push_back(e.label);
  BinaryTask out;
  out.positive_class = resolve_positive_class(raw, task);
  for (const Event& e : events.events) {
    const bool positive = e.label == out.positive_class;
    if (!positive && task.negative_class && e.label != *task.negative_class) continue;
    out.events.events.push_back(e);
    out.labels.push_back(positive ? 1 : 0);
  }
  return out;
}

std::vector<FeatureMatrix> extract_all_features(const Recording& recording,
                                                const EventList& events,
                                                const TaskDefinition& task) {
  const auto windows =
      segment(recording, events, task.window_seconds, task.alignment, task.feature_input);
  std::vector<FeatureMatrix> out;
  out.reserve(windows.size());
  for (const auto& channel_windows : windows) {
    out.push_back(extract_feature_matrix(channel_windows, recording.fs));
  }
  return out;
}

ParticipantReport evaluate_participant(const Recording& recording, const EventList& events,
                                       const EvaluationConfig& config) {
  const BinaryTask task = make_binary_task(events, config.task);
  std::vector<FeatureMatrix> features = extract_all_features(recording, task.events, config.task);
  ParticipantReport report =
      evaluate_features(features, task.labels, config, recording.participant_id);
  report.positive_class = task.positive_class;
  return report;
}

ParticipantSelection selection_from_report(const ParticipantReport& report,
                                           const std::vector<ChannelMeta>& channels) {
  std::set<Eigen::Index> selected;
  for (const FoldReport& f : report.folds) {
    if (f.mode == Mode::kCombined) selected.insert(f.selected_channels.begin(), f.selected_channels.end());
  }
  return ParticipantSelection{report.participant_id, {selected.begin(), selected.end()}, channels};
}

RegionHistogram region_contributions(const std::vector<ParticipantSelection>& participants) {
  std::map<std::string, RegionCount> counts;
  for (const ParticipantSelection& p : participants) {
    std::set<std::string> seen;
    std::set<Eigen::Index> unique(p.selected_channels.begin(), p.selected_channels.end());
    for (Eigen::Index ch : unique) {
      std::string region = kUnlabeledRegion;
      if (ch >= 0 && ch < static_cast<Eigen::Index>(p.channels.size())) {
        const auto& meta = p.channels[static_cast<std::size_t>(ch)];
        if (meta.region && !meta.region->empty()) region = *meta.region;
      }
      RegionCount& rc = counts[region];
      rc.region = region;
      ++rc.channel_count;
      if (seen.insert(region).second) ++rc.participant_recurrence;
    }
  }
  RegionHistogram h;
  for (auto& [name, rc] : counts) h.rows.push_back(rc);
  std::stable_sort(h.rows.begin(), h.rows.end(), [](const RegionCount& a, const RegionCount& b) {
    if (a.participant_recurrence != b.participant_recurrence) {
      return a.participant_recurrence > b.participant_recurrence;
    }
    if (a.channel_count != b.channel_count) return a.channel_count > b.channel_count;
    return a.region < b.region;
  });
  return h;
}

void write_region_csv(std::ostream& out, const RegionHistogram& histogram) {
  out << "region,participant_recurrence,channel_count\n";
  for (const RegionCount& rc : histogram.rows) {
    out << rc.region << ',' << rc.participant_recurrence << ',' << rc.channel_count << '\n';
  }
}

}  // namespace ieegdec
