#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ieegdec/signal.hpp"

namespace ieegdec {

// Synthetic participant: 1/f background on every channel, plus a gamma-band
// burst on the informative channels during each positive-class trial.
//
// Burst amplitude on (trial, channel) is
//   effect_size * kBurstScale * sigma_gamma * u,
// where sigma_gamma is the channel's background gamma-band RMS and u is an
// independent unit-mean lognormal draw (log-sd burst_jitter), so individual
// channels miss some trials and pooling channels helps. The background gamma power also drifts
// slowly (log-gain with standard deviation gain_variability).
struct SynthSpec {
  std::string participant_id = "synth-01";
  int n_channels = 20;
  std::vector<int> informative_channels = {0, 1, 2, 3};
  int n_trials_negative = 100;
  int n_trials_positive = 100;
  double fs = 512.0;
  double window_seconds = 2.0;
  double effect_size = 2.0;
  double pink_weight = 1.0;
  double white_weight = 0.5;
  double gain_variability = 0.3;
  double burst_jitter = 0.5;
  double gap_seconds = 0.5;
  double margin_seconds = 1.0;
  // One label per channel; empty assigns "region-A" to informative channels
  // and cycles "region-B".."region-E" over the rest.
  std::vector<std::string> regions;
  std::vector<std::string> class_names = {"rest", "task"};  // [negative, positive]
  std::uint64_t seed = 0;

  // Throws Error(kSpecInvalid).
  void validate() const;
};

inline constexpr double kBurstScale = 0.5;
inline constexpr double kMicrovoltScale = 10.0;

struct SynthOutput {
  Recording recording;
  EventList events;  // label 0 = class_names[0], 1 = class_names[1]
  std::vector<std::string> class_names;
};

SynthOutput generate(const SynthSpec& spec);

SynthSpec synth_spec_from_json(std::string_view text);
std::string synth_spec_to_json(const SynthSpec& spec);

}  // namespace ieegdec
