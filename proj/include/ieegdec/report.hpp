#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ieegdec/evaluation.hpp"

namespace ieegdec {

// Files written by `evaluate` into its output directory.
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kFoldsJsonFile = "folds.json";
inline constexpr const char* kFoldsCsvFile = "folds.csv";
inline constexpr const char* kSelectedCsvFile = "selected_channels.csv";
inline constexpr const char* kSummaryFormat = "ieegdec-summary/1";

// Context that the report needs beyond the ParticipantReport itself.
struct RunContext {
  std::vector<ChannelMeta> channels;
  std::vector<std::string> labels;  // container label names, indexed by code
  std::vector<int> binary_labels;   // labels of the evaluated trials
};

// Every float is printed with 17 significant digits.
std::string summary_to_json(const ParticipantReport& report, const RunContext& context);
std::string folds_to_json(const ParticipantReport& report, const RunContext& context);
void write_folds_csv(std::ostream& out, const ParticipantReport& report);
void write_selected_csv(std::ostream& out, const ParticipantReport& report, const RunContext& context);

// What `regions` and `report` read back from a run directory.
struct RunSummary {
  std::string participant_id;
  ClassifierKind kind = ClassifierKind::kRandomForest;
  ModeSummary best_channel;
  ModeSummary combined;
  ParticipantSelection selection;
};

RunSummary read_run_summary(const std::filesystem::path& run_dir);

// One row per (classifier, mode): participant-level and fold-level mean/sd.
struct ReportRow {
  ClassifierKind kind = ClassifierKind::kRandomForest;
  Mode mode = Mode::kBestChannel;
  int n_participants = 0;
  int n_folds = 0;
  double participant_f1_mean = 0.0;
  double participant_f1_sd = 0.0;  // population SD over participant means
  double fold_f1_mean = 0.0;
  double fold_f1_sd = 0.0;  // population SD over all folds pooled
  double precision_mean = 0.0;
  double recall_mean = 0.0;
};

std::vector<ReportRow> aggregate_runs(const std::vector<RunSummary>& runs);
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);

// "%.17g".
std::string format_double(double value);

}  // namespace ieegdec
