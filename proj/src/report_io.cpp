#include "ieegdec/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "ieegdec/container.hpp"
#include "ieegdec/error.hpp"
#include "json_codec.hpp"

namespace ieegdec {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
constexpr const char* kModule = "pipeline-cli";

json mode_value(const ModeSummary& s) {
  return json{{"f1_mean", s.f1_mean},
              {"f1_sd", s.f1_sd},
              {"precision_mean", s.precision_mean},
              {"recall_mean", s.recall_mean},
              {"fold_f1", s.fold_f1}};
}

ModeSummary mode_from_value(const json& v) {
  ModeSummary s;
  s.f1_mean = v.at("f1_mean").get<double>();
  s.f1_sd = v.at("f1_sd").get<double>();
  s.precision_mean = v.at("precision_mean").get<double>();
  s.recall_mean = v.at("recall_mean").get<double>();
  s.fold_f1 = v.at("fold_f1").get<std::vector<double>>();
  return s;
}

json channel_value(const ChannelMeta& ch) {
  json v{{"name", ch.name}};
  v["region"] = ch.region ? json(*ch.region) : json(nullptr);
  v["hemisphere"] = ch.hemisphere ? json(to_string(*ch.hemisphere)) : json(nullptr);
  return v;
}

std::string region_of(const RunContext& ctx, Eigen::Index ch) {
  const auto& meta = ctx.channels.at(static_cast<std::size_t>(ch));
  return meta.region ? *meta.region : "";
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string summary_to_json(const ParticipantReport& report, const RunContext& ctx) {
  const ParticipantSelection sel = selection_from_report(report, ctx.channels);
  json selected = json::array();
  for (Eigen::Index ch : sel.selected_channels) {
    selected.push_back({{"channel_index", ch},
                        {"name", ctx.channels.at(static_cast<std::size_t>(ch)).name},
                        {"region", ctx.channels.at(static_cast<std::size_t>(ch)).region
                                       ? json(region_of(ctx, ch))
                                       : json(nullptr)}});
  }
  json channels = json::array();
  for (const auto& ch : ctx.channels) channels.push_back(channel_value(ch));

  long long n_pos = 0;
  for (int l : ctx.binary_labels) n_pos += l;
  const auto positive = static_cast<std::size_t>(report.positive_class);
  json root{{"format", kSummaryFormat},
            {"participant_id", report.participant_id},
            {"classifier", to_string(report.kind)},
            {"positive_class", positive < ctx.labels.size() ? json(ctx.labels[positive])
                                                            : json(report.positive_class)},
            {"n_trials", ctx.binary_labels.size()},
            {"n_positive", n_pos},
            {"n_folds", report.best_channel.fold_f1.size()},
            {"modes",
             {{"best_channel", mode_value(report.best_channel)},
              {"combined", mode_value(report.combined)}}},
            {"selected_channels", selected},
            {"channels", channels}};
  return codec::dump_fixed_precision(root);
}

std::string folds_to_json(const ParticipantReport& report, const RunContext& ctx) {
  json folds = json::array();
  for (const FoldReport& f : report.folds) {
    json names = json::array();
    for (Eigen::Index ch : f.selected_channels) names.push_back(ctx.channels.at(static_cast<std::size_t>(ch)).name);
    json v{{"fold", f.fold_index},
           {"mode", to_string(f.mode)},
           {"confusion", {{"tp", f.confusion.tp}, {"fp", f.confusion.fp}, {"fn", f.confusion.fn}, {"tn", f.confusion.tn}}},
           {"precision", f.metrics.precision},
           {"recall", f.metrics.recall},
           {"f1", f.metrics.f1},
           {"selected_channels", f.selected_channels},
           {"selected_names", names},
           {"per_channel_validation_f1", f.per_channel_validation_f1},
           {"validation_history", f.validation_history}};
    if (f.exhaustive_validation_f1) v["exhaustive_validation_f1"] = *f.exhaustive_validation_f1;
    folds.push_back(std::move(v));
  }
  json root{{"participant_id", report.participant_id}, {"classifier", to_string(report.kind)}, {"folds", folds}};
  return codec::dump_fixed_precision(root);
}

void write_folds_csv(std::ostream& out, const ParticipantReport& report) {
  out << "fold,mode,tp,fp,fn,tn,precision,recall,f1,selected_channels\n";
  for (const FoldReport& f : report.folds) {
    std::string channels;
    for (std::size_t i = 0; i < f.selected_channels.size(); ++i) {
      channels += (i ? ";" : "") + std::to_string(f.selected_channels[i]);
    }
    out << f.fold_index << ',' << to_string(f.mode) << ',' << f.confusion.tp << ',' << f.confusion.fp << ','
        << f.confusion.fn << ',' << f.confusion.tn << ',' << format_double(f.metrics.precision) << ','
        << format_double(f.metrics.recall) << ',' << format_double(f.metrics.f1) << ',' << channels << '\n';
  }
}

void write_selected_csv(std::ostream& out, const ParticipantReport& report, const RunContext& ctx) {
  out << "fold,rank,channel_index,channel_name,region\n";
  for (const FoldReport& f : report.folds) {
    if (f.mode != Mode::kCombined) continue;
    for (std::size_t r = 0; r < f.selected_channels.size(); ++r) {
      const Eigen::Index ch = f.selected_channels[r];
      out << f.fold_index << ',' << r << ',' << ch << ','
          << csv_field(ctx.channels.at(static_cast<std::size_t>(ch)).name) << ','
          << csv_field(region_of(ctx, ch)) << '\n';
    }
  }
}

RunSummary read_run_summary(const fs::path& run_dir) {
  const fs::path path = run_dir / kSummaryFile;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, kModule, "cannot read '" + path.string() + "'");
  try {
    const json v = json::parse(in);
    if (v.at("format") != kSummaryFormat) {
      throw Error(ErrorCode::kInvalidArgument, kModule, "'" + path.string() + "' has an unknown format");
    }
    RunSummary s;
    s.participant_id = v.at("participant_id").get<std::string>();
    s.kind = classifier_kind_from_string(v.at("classifier").get<std::string>());
    s.best_channel = mode_from_value(v.at("modes").at("best_channel"));
    s.combined = mode_from_value(v.at("modes").at("combined"));
    s.selection.participant_id = s.participant_id;
    for (const json& ch : v.at("channels")) {
      ChannelMeta meta;
      meta.name = ch.at("name").get<std::string>();
      if (ch.contains("region") && ch.at("region").is_string()) meta.region = ch.at("region").get<std::string>();
      if (ch.contains("hemisphere") && ch.at("hemisphere").is_string()) {
        meta.hemisphere = hemisphere_from_string(ch.at("hemisphere").get<std::string>());
      }
      s.selection.channels.push_back(std::move(meta));
    }
    for (const json& sel : v.at("selected_channels")) {
      s.selection.selected_channels.push_back(sel.at("channel_index").get<Eigen::Index>());
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "'" + path.string() + "' is not a valid summary: " + e.what());
  }
}

std::vector<ReportRow> aggregate_runs(const std::vector<RunSummary>& runs) {
  std::vector<ReportRow> rows;
  for (ClassifierKind kind : kAllClassifierKinds) {
    for (Mode mode : {Mode::kBestChannel, Mode::kCombined}) {
      std::vector<double> participant_f1, fold_f1, precision, recall;
      for (const RunSummary& r : runs) {
        if (r.kind != kind) continue;
        const ModeSummary& s = mode == Mode::kBestChannel ? r.best_channel : r.combined;
        participant_f1.push_back(s.f1_mean);
        precision.push_back(s.precision_mean);
        recall.push_back(s.recall_mean);
        fold_f1.insert(fold_f1.end(), s.fold_f1.begin(), s.fold_f1.end());
      }
      if (participant_f1.empty()) continue;
      ReportRow row;
      row.kind = kind;
      row.mode = mode;
      row.n_participants = static_cast<int>(participant_f1.size());
      row.n_folds = static_cast<int>(fold_f1.size());
      std::tie(row.participant_f1_mean, row.participant_f1_sd) = mean_sd(participant_f1);
      std::tie(row.fold_f1_mean, row.fold_f1_sd) = mean_sd(fold_f1);
      row.precision_mean = mean_sd(precision).first;
      row.recall_mean = mean_sd(recall).first;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "classifier,mode,n_participants,n_folds,participant_f1_mean,participant_f1_sd,"
         "fold_f1_mean,fold_f1_sd,precision_mean,recall_mean,f1_display\n";
  for (const ReportRow& r : rows) {
    char display[64];
    // Spread across participants; a single participant falls back to folds.
    const bool pooled = r.n_participants < 2;
    std::snprintf(display, sizeof display, "%.2f ± %.2f", pooled ? r.fold_f1_mean : r.participant_f1_mean,
                  pooled ? r.fold_f1_sd : r.participant_f1_sd);
    out << to_string(r.kind) << ',' << to_string(r.mode) << ',' << r.n_participants << ',' << r.n_folds << ','
        << format_double(r.participant_f1_mean) << ',' << format_double(r.participant_f1_sd) << ','
        << format_double(r.fold_f1_mean) << ',' << format_double(r.fold_f1_sd) << ','
        << format_double(r.precision_mean) << ',' << format_double(r.recall_mean) << ',' << display << '\n';
  }
}

}  // namespace ieegdec
