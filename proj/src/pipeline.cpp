#include "ieegdec/pipeline.hpp"

#include <fstream>
#include <functional>

#include "ieegdec/error.hpp"

namespace ieegdec {
namespace {

namespace fs = std::filesystem;
constexpr const char* kModule = "pipeline-cli";

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::kIo, kModule, "cannot create '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, kModule, "cannot write '" + path.string() + "'");
  body(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, kModule, "failed writing '" + path.string() + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, [&](std::ostream& out) { out << text << '\n'; });
}

}  // namespace

void run_synth(const SynthSpec& spec, const fs::path& out_dir) {
  SynthOutput generated = generate(spec);
  Container c{std::move(generated.recording), std::move(generated.events), std::move(generated.class_names)};
  write_container(out_dir, c);
}

void run_features(const fs::path& in_dir, const fs::path& out_csv, const FeatureDumpOptions& options) {
  const Container c = read_container(in_dir);
  const auto windows =
      segment(c.recording, c.events, options.window_seconds, options.alignment, options.feature_input);
  std::vector<FeatureMatrix> matrices;
  for (const auto& channel_windows : windows) {
    matrices.push_back(extract_feature_matrix(channel_windows, c.recording.fs));
  }
  write_file(out_csv, [&](std::ostream& out) { write_feature_csv(out, matrices, c.labels); });
}

ParticipantReport run_evaluate(const fs::path& in_dir, const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  const Container c = read_container(in_dir);
  EvaluationConfig eval = config.evaluation;
  eval.task = resolve_task(config, c.labels);

  const BinaryTask task = make_binary_task(c.events, eval.task);
  const std::vector<FeatureMatrix> features = extract_all_features(c.recording, task.events, eval.task);
  ParticipantReport report = evaluate_features(features, task.labels, eval, c.recording.participant_id);
  report.positive_class = task.positive_class;

  RunContext ctx{c.recording.channels, c.labels, task.labels};
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, kModule, "cannot create '" + out_dir.string() + "'");
  write_text(out_dir / kSummaryFile, summary_to_json(report, ctx));
  write_text(out_dir / kFoldsJsonFile, folds_to_json(report, ctx));
  write_file(out_dir / kFoldsCsvFile, [&](std::ostream& out) { write_folds_csv(out, report); });
  write_file(out_dir / kSelectedCsvFile, [&](std::ostream& out) { write_selected_csv(out, report, ctx); });
  write_text(out_dir / "config.json", run_config_to_json(config));
  return report;
}

RegionHistogram run_regions(const std::vector<fs::path>& runs, const fs::path& out_csv) {
  if (runs.empty()) throw Error(ErrorCode::kInvalidArgument, kModule, "regions needs at least one run directory");
  std::vector<ParticipantSelection> selections;
  for (const fs::path& run : runs) selections.push_back(read_run_summary(run).selection);
  RegionHistogram h = region_contributions(selections);
  write_file(out_csv, [&](std::ostream& out) { write_region_csv(out, h); });
  return h;
}

std::vector<ReportRow> run_report(const std::vector<fs::path>& runs, const fs::path& out_csv) {
  if (runs.empty()) throw Error(ErrorCode::kInvalidArgument, kModule, "report needs at least one run directory");
  std::vector<RunSummary> summaries;
  for (const fs::path& run : runs) summaries.push_back(read_run_summary(run));
  std::vector<ReportRow> rows = aggregate_runs(summaries);
  write_file(out_csv, [&](std::ostream& out) { write_report_csv(out, rows); });
  return rows;
}

}  // namespace ieegdec
