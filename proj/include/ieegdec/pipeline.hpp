#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ieegdec/config.hpp"
#include "ieegdec/container.hpp"
#include "ieegdec/report.hpp"
#include "ieegdec/synth.hpp"

namespace ieegdec {

// Library entry points behind each CLI subcommand.

void run_synth(const SynthSpec& spec, const std::filesystem::path& out_dir);

struct FeatureDumpOptions {
  double window_seconds = 2.0;
  Alignment alignment = Alignment::kOnset;
  FeatureInput feature_input = FeatureInput::kEnvelope;
};

// Every event of the container, every channel.
void run_features(const std::filesystem::path& in_dir, const std::filesystem::path& out_csv,
                  const FeatureDumpOptions& options = {});

// Writes summary.json, folds.json, folds.csv, selected_channels.csv and the
// normalised config.json into `out_dir`.
ParticipantReport run_evaluate(const std::filesystem::path& in_dir, const RunConfig& config,
                               const std::filesystem::path& out_dir);

RegionHistogram run_regions(const std::vector<std::filesystem::path>& runs,
                            const std::filesystem::path& out_csv);

std::vector<ReportRow> run_report(const std::vector<std::filesystem::path>& runs,
                                  const std::filesystem::path& out_csv);

}  // namespace ieegdec
