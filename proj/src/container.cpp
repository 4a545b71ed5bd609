#include "ieegdec/container.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "ieegdec/error.hpp"

namespace ieegdec {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kModule = "pipeline-cli";

static_assert(sizeof(float) == 4, "float must be 32 bits");

float load_le_float(const unsigned char* p) {
  std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                       (static_cast<std::uint32_t>(p[2]) << 16) |
                       (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

void store_le_float(float value, unsigned char* p) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  p[0] = static_cast<unsigned char>(bits & 0xFFu);
  p[1] = static_cast<unsigned char>((bits >> 8) & 0xFFu);
  p[2] = static_cast<unsigned char>((bits >> 16) & 0xFFu);
  p[3] = static_cast<unsigned char>((bits >> 24) & 0xFFu);
}

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::optional<long long> parse_integer(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const long long v = std::stoll(text, &used);
    if (used != text.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Everything parsed so far; fields stay empty when a check failed.
struct Parsed {
  std::string participant_id;
  double fs = 0.0;
  std::vector<ChannelMeta> channels;
  std::vector<std::string> labels;
  std::string data_file = kDataFile;
  long long n_channels = -1;
  long long n_samples = -1;
  Eigen::MatrixXd data;
  bool data_loaded = false;
  EventList events;
};

void check_manifest(const fs::path& dir, Parsed& p, std::vector<std::string>& v) {
  std::ifstream in(dir / kManifestFile);
  if (!in) {
    v.push_back("manifest.json is missing");
    return;
  }
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    v.push_back(std::string("manifest.json is not valid JSON: ") + e.what());
    return;
  }
  if (!m.is_object()) {
    v.push_back("manifest.json must be an object");
    return;
  }

  if (!m.contains("format_version") || !m["format_version"].is_string()) {
    v.push_back("manifest: format_version is missing");
  } else if (m["format_version"] != kContainerFormat) {
    v.push_back("manifest: unsupported format_version '" + m["format_version"].get<std::string>() + "'");
  }

  if (m.contains("participant_id") && m["participant_id"].is_string() &&
      !m["participant_id"].get<std::string>().empty()) {
    p.participant_id = m["participant_id"].get<std::string>();
  } else {
    v.push_back("manifest: participant_id must be a non-empty string");
  }

  if (m.contains("fs") && m["fs"].is_number() && m["fs"].get<double>() > 0.0 &&
      std::isfinite(m["fs"].get<double>())) {
    p.fs = m["fs"].get<double>();
  } else {
    v.push_back("manifest: fs must be a positive number");
  }

  if (!m.contains("channels") || !m["channels"].is_array() || m["channels"].empty()) {
    v.push_back("manifest: channels must be a non-empty array");
  } else {
    std::set<std::string> names;
    std::size_t i = 0;
    for (const auto& c : m["channels"]) {
      const std::string where = "manifest: channel " + std::to_string(i++);
      ChannelMeta meta;
      if (!c.is_object() || !c.contains("name") || !c["name"].is_string() ||
          c["name"].get<std::string>().empty()) {
        v.push_back(where + " needs a non-empty name");
      } else {
        meta.name = c["name"].get<std::string>();
        if (!names.insert(meta.name).second) v.push_back(where + " duplicates name '" + meta.name + "'");
      }
      if (c.is_object() && c.contains("region") && !c["region"].is_null()) {
        if (c["region"].is_string()) {
          meta.region = c["region"].get<std::string>();
        } else {
          v.push_back(where + " region must be a string or null");
        }
      }
      if (c.is_object() && c.contains("hemisphere") && !c["hemisphere"].is_null()) {
        try {
          meta.hemisphere = hemisphere_from_string(c["hemisphere"].get<std::string>());
        } catch (const std::exception&) {
          v.push_back(where + " hemisphere must be \"left\", \"right\" or null");
        }
      }
      p.channels.push_back(std::move(meta));
    }
  }

  if (!m.contains("labels") || !m["labels"].is_array() || m["labels"].empty()) {
    v.push_back("manifest: labels must be a non-empty array of names");
  } else {
    std::set<std::string> seen;
    for (const auto& l : m["labels"]) {
      if (!l.is_string() || l.get<std::string>().empty()) {
        v.push_back("manifest: label names must be non-empty strings");
        continue;
      }
      const std::string name = l.get<std::string>();
      if (name.find_first_of(",\n\r\"") != std::string::npos) {
        v.push_back("manifest: label '" + name + "' contains a reserved character");
      }
      if (!seen.insert(name).second) v.push_back("manifest: duplicate label '" + name + "'");
      p.labels.push_back(name);
    }
  }

  if (!m.contains("data") || !m["data"].is_object()) {
    v.push_back("manifest: data section is missing");
    return;
  }
  const json& d = m["data"];
  auto expect = [&](const char* key, const char* value) {
    if (!d.contains(key) || d[key] != value) {
      v.push_back(std::string("manifest: data.") + key + " must be \"" + value + "\"");
    }
  };
  expect("dtype", "float32");
  expect("endianness", "little");
  expect("order", "row-major");
  if (d.contains("file")) {
    if (d["file"].is_string() && !d["file"].get<std::string>().empty() &&
        fs::path(d["file"].get<std::string>()).filename() == fs::path(d["file"].get<std::string>())) {
      p.data_file = d["file"].get<std::string>();
    } else {
      v.push_back("manifest: data.file must be a plain file name");
    }
  }
  if (!d.contains("shape") || !d["shape"].is_array() || d["shape"].size() != 2 ||
      !d["shape"][0].is_number_integer() || !d["shape"][1].is_number_integer() ||
      d["shape"][0].get<long long>() < 1 || d["shape"][1].get<long long>() < 1) {
    v.push_back("manifest: data.shape must be [n_channels, n_samples] with positive integers");
    return;
  }
  p.n_channels = d["shape"][0].get<long long>();
  p.n_samples = d["shape"][1].get<long long>();
  if (!p.channels.empty() && static_cast<long long>(p.channels.size()) != p.n_channels) {
    v.push_back("shape: manifest lists " + std::to_string(p.channels.size()) +
                " channels but data.shape declares " + std::to_string(p.n_channels));
  }
}

void check_data(const fs::path& dir, Parsed& p, std::vector<std::string>& v) {
  if (p.n_channels < 1 || p.n_samples < 1) return;
  const fs::path path = dir / p.data_file;
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) {
    v.push_back("data file '" + p.data_file + "' is missing");
    return;
  }
  const auto expected = static_cast<std::uintmax_t>(p.n_channels) *
                        static_cast<std::uintmax_t>(p.n_samples) * 4u;
  if (size != expected) {
    v.push_back("shape: data file holds " + std::to_string(size) + " bytes but shape [" +
                std::to_string(p.n_channels) + ", " + std::to_string(p.n_samples) + "] needs " +
                std::to_string(expected));
    return;
  }
  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> bytes(static_cast<std::size_t>(size));
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
    v.push_back("data file could not be read");
    return;
  }
  p.data.resize(p.n_channels, p.n_samples);
  long long non_finite = 0;
  const unsigned char* ptr = bytes.data();
  for (Eigen::Index r = 0; r < p.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.data.cols(); ++c, ptr += 4) {
      const float f = load_le_float(ptr);
      if (!std::isfinite(f)) ++non_finite;
      p.data(r, c) = static_cast<double>(f);
    }
  }
  if (non_finite > 0) {
    v.push_back("data: " + std::to_string(non_finite) + " non-finite samples");
    return;
  }
  p.data_loaded = true;
}

void check_events(const fs::path& dir, Parsed& p, std::vector<std::string>& v) {
  std::ifstream in(dir / kEventsFile);
  if (!in) {
    v.push_back("events.csv is missing");
    return;
  }
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != "onset_sample,label") {
    v.push_back("events.csv: header must be 'onset_sample,label'");
    return;
  }
  std::map<std::string, int> codes;
  for (std::size_t i = 0; i < p.labels.size(); ++i) codes[p.labels[i]] = static_cast<int>(i);

  long long row = 1;
  long long previous = -1;
  while (std::getline(in, line)) {
    ++row;
    line = trim_cr(line);
    if (line.empty()) continue;
    const std::string where = "events.csv line " + std::to_string(row);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      v.push_back(where + ": expected two fields");
      continue;
    }
    const auto onset = parse_integer(line.substr(0, comma));
    const std::string label = line.substr(comma + 1);
    bool good = true;
    if (!onset || *onset < 0) {
      v.push_back(where + ": onset_sample must be a non-negative integer");
      good = false;
    } else {
      if (p.n_samples > 0 && *onset >= p.n_samples) {
        v.push_back("bounds: " + where + ": onset " + std::to_string(*onset) + " is past the end of data (" +
                    std::to_string(p.n_samples) + " samples)");
        good = false;
      }
      if (*onset <= previous) {
        v.push_back(where + ": onsets must be strictly increasing");
        good = false;
      }
      previous = std::max(previous, *onset);
    }
    const auto code = codes.find(label);
    if (code == codes.end()) {
      v.push_back(where + ": label '" + label + "' is not in the manifest label set");
      good = false;
    }
    if (good) p.events.events.push_back(Event{static_cast<Eigen::Index>(*onset), code->second});
  }
}

Parsed parse(const fs::path& dir, std::vector<std::string>& v) {
  Parsed p;
  if (!fs::is_directory(dir)) {
    v.push_back("'" + dir.string() + "' is not a directory");
    return p;
  }
  check_manifest(dir, p, v);
  check_data(dir, p, v);
  check_events(dir, p, v);
  if (p.fs > 0.0 && !(p.fs > 2.0 * kGammaHighHz)) {
    v.push_back("manifest: fs " + std::to_string(p.fs) + " Hz cannot resolve the gamma band (needs > 240 Hz)");
  }
  return p;
}

}  // namespace

std::string to_string(Hemisphere hemisphere) {
  return hemisphere == Hemisphere::kLeft ? "left" : "right";
}

Hemisphere hemisphere_from_string(const std::string& text) {
  if (text == "left") return Hemisphere::kLeft;
  if (text == "right") return Hemisphere::kRight;
  throw Error(ErrorCode::kInvalidArgument, kModule, "unknown hemisphere '" + text + "'");
}

ContainerReport validate_container(const fs::path& dir) {
  ContainerReport report;
  parse(dir, report.violations);
  return report;
}

Container read_container(const fs::path& dir) {
  std::vector<std::string> violations;
  Parsed p = parse(dir, violations);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "container '" << dir.string() << "' is invalid:";
    for (const auto& item : violations) msg << "\n  " << item;
    throw Error(ErrorCode::kContainerCorrupt, kModule, msg.str());
  }
  Container c;
  c.recording.participant_id = std::move(p.participant_id);
  c.recording.fs = p.fs;
  c.recording.channels = std::move(p.channels);
  c.recording.data = std::move(p.data);
  c.events = std::move(p.events);
  c.labels = std::move(p.labels);
  return c;
}

void write_container(const fs::path& dir, const Container& c) {
  const Recording& rec = c.recording;
  rec.validate();
  c.events.validate();
  if (c.labels.empty()) throw Error(ErrorCode::kInvalidArgument, kModule, "container needs a label set");
  for (const Event& e : c.events.events) {
    if (e.label >= static_cast<int>(c.labels.size())) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "event label code " + std::to_string(e.label) + " has no name");
    }
    if (e.onset_sample >= rec.n_samples()) {
      throw Error(ErrorCode::kOutOfBounds, kModule,
                  "event onset " + std::to_string(e.onset_sample) + " is past the end of data");
    }
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, kModule, "cannot create '" + dir.string() + "': " + ec.message());

  json channels = json::array();
  for (const auto& ch : rec.channels) {
    json entry{{"name", ch.name}};
    entry["region"] = ch.region ? json(*ch.region) : json(nullptr);
    entry["hemisphere"] = ch.hemisphere ? json(to_string(*ch.hemisphere)) : json(nullptr);
    channels.push_back(std::move(entry));
  }
  json manifest{{"format_version", kContainerFormat},
                {"participant_id", rec.participant_id},
                {"fs", rec.fs},
                {"channels", channels},
                {"labels", c.labels},
                {"data",
                 {{"file", kDataFile},
                  {"dtype", "float32"},
                  {"endianness", "little"},
                  {"order", "row-major"},
                  {"shape", {rec.n_channels(), rec.n_samples()}},
                  {"units", "uV"}}}};

  auto open = [&](const char* name, std::ios::openmode mode) {
    std::ofstream out(dir / name, mode);
    if (!out) throw Error(ErrorCode::kIo, kModule, "cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open(kManifestFile, std::ios::out | std::ios::trunc);
    out << manifest.dump(2) << '\n';
  }
  {
    auto out = open(kDataFile, std::ios::out | std::ios::binary | std::ios::trunc);
    std::vector<unsigned char> row(static_cast<std::size_t>(rec.n_samples()) * 4u);
    for (Eigen::Index r = 0; r < rec.n_channels(); ++r) {
      for (Eigen::Index s = 0; s < rec.n_samples(); ++s) {
        store_le_float(static_cast<float>(rec.data(r, s)), row.data() + 4 * s);
      }
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw Error(ErrorCode::kIo, kModule, "failed writing data.bin");
  }
  {
    auto out = open(kEventsFile, std::ios::out | std::ios::trunc);
    out << "onset_sample,label\n";
    for (const Event& e : c.events.events) {
      out << e.onset_sample << ',' << c.labels[static_cast<std::size_t>(e.label)] << '\n';
    }
  }
}

}  // namespace ieegdec
