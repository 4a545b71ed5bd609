#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ieegdec/signal.hpp"

namespace ieegdec {

// On-disk participant layout:
//   manifest.json  metadata, channel list, label set, data layout
//   data.bin       little-endian float32, row-major [n_channels x n_samples], microvolts
//   events.csv     header "onset_sample,label"; labels are names from the manifest
inline constexpr const char* kContainerFormat = "ieegdec-container/1";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kDataFile = "data.bin";
inline constexpr const char* kEventsFile = "events.csv";

struct Container {
  Recording recording;
  EventList events;                 // label codes index into `labels`
  std::vector<std::string> labels;  // declared label set
};

struct ContainerReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every container invariant and collects all violations.
ContainerReport validate_container(const std::filesystem::path& dir);

// Throws Error(kContainerCorrupt) listing the violations.
Container read_container(const std::filesystem::path& dir);

// Creates `dir` if needed. Samples are rounded to float32.
void write_container(const std::filesystem::path& dir, const Container& container);

std::string to_string(Hemisphere hemisphere);
Hemisphere hemisphere_from_string(const std::string& text);

}  // namespace ieegdec
