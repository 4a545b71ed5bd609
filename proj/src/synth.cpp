#include "ieegdec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ieegdec/error.hpp"
#include "ieegdec/fft.hpp"
#include "ieegdec/rng.hpp"
#include "json_codec.hpp"

namespace ieegdec {
namespace {

constexpr const char* kModule = "synth";
constexpr double kCarrierLowHz = 70.0;
constexpr double kCarrierHighHz = 115.0;
constexpr double kGainTimeConstantSeconds = 0.5;

enum SeedTag : std::uint64_t { kOrderSeed = 1, kNoiseSeed = 2, kGainSeed = 3, kBurstSeed = 4 };

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kSpecInvalid, kModule, message);
}

// Unit-RMS noise with a 1/f power spectrum, shaped in the frequency domain.
Eigen::VectorXd pink_noise(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd white(n);
  for (Eigen::Index i = 0; i < n; ++i) white[i] = rng.normal();
  Eigen::VectorXcd spectrum = dft_real(white);
  spectrum[0] = 0.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    const Eigen::Index freq_index = std::min(k, n - k);
    spectrum[k] /= std::sqrt(static_cast<double>(freq_index));
  }
  Eigen::VectorXd pink = idft(spectrum).real();
  const double rms = std::sqrt(pink.squaredNorm() / static_cast<double>(n));
  return rms > 0.0 ? Eigen::VectorXd(pink / rms) : pink;
}

// Slowly varying log-gain: stationary unit-variance AR(1) with time constant
// kGainTimeConstantSeconds.
Eigen::VectorXd slow_log_gain(Eigen::Index n, double fs, Rng& rng) {
  const double rho = std::exp(-1.0 / (kGainTimeConstantSeconds * fs));
  const double innovation = std::sqrt(1.0 - rho * rho);
  Eigen::VectorXd out(n);
  double state = rng.normal();
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = state;
    state = rho * state + innovation * rng.normal();
  }
  return out;
}

// Smallest 2^a 3^b 5^c >= n, so the noise FFTs stay on the fast path.
Eigen::Index next_smooth_length(Eigen::Index n) {
  for (Eigen::Index m = std::max<Eigen::Index>(n, 1);; ++m) {
    Eigen::Index r = m;
    for (Eigen::Index p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

std::vector<std::string> default_regions(const SynthSpec& spec) {
  static const char* kOthers[] = {"region-B", "region-C", "region-D", "region-E"};
  std::set<int> informative(spec.informative_channels.begin(), spec.informative_channels.end());
  std::vector<std::string> regions;
  int other = 0;
  for (int ch = 0; ch < spec.n_channels; ++ch) {
    if (informative.count(ch)) {
      regions.emplace_back("region-A");
    } else {
      regions.emplace_back(kOthers[other++ % 4]);
    }
  }
  return regions;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_channels < 1) invalid("n_channels must be >= 1");
  std::set<int> seen;
  for (int ch : informative_channels) {
    if (ch < 0 || ch >= n_channels) invalid("informative channel " + std::to_string(ch) + " out of range");
    if (!seen.insert(ch).second) invalid("duplicate informative channel " + std::to_string(ch));
  }
  if (n_trials_negative < 1 || n_trials_positive < 1) invalid("each class needs at least one trial");
  if (!(fs > 2.0 * kGammaHighHz)) invalid("fs must exceed 240 Hz");
  if (!(window_seconds > 0.0)) invalid("window_seconds must be positive");
  if (!(effect_size >= 0.0) || !std::isfinite(effect_size)) invalid("effect_size must be >= 0");
  if (!(pink_weight >= 0.0) || !(white_weight >= 0.0) || pink_weight + white_weight <= 0.0) {
    invalid("noise weights must be non-negative and not both zero");
  }
  if (!(gain_variability >= 0.0)) invalid("gain_variability must be >= 0");
  if (!(burst_jitter >= 0.0)) invalid("burst_jitter must be >= 0");
  if (!(gap_seconds >= 0.0) || !(margin_seconds >= 0.0)) invalid("gap/margin must be >= 0");
  if (!regions.empty() && static_cast<int>(regions.size()) != n_channels) {
    invalid("regions must list one label per channel");
  }
  if (class_names.size() != 2 || class_names[0] == class_names[1] || class_names[0].empty() ||
      class_names[1].empty()) {
    invalid("class_names must be two distinct non-empty names");
  }
  if (participant_id.empty()) invalid("participant_id must be non-empty");
}

SynthOutput generate(const SynthSpec& spec) {
  spec.validate();
  const double fs = spec.fs;
  const Eigen::Index win = window_length(spec.window_seconds, fs);
  const auto gap = static_cast<Eigen::Index>(std::llround(spec.gap_seconds * fs));
  const auto margin = static_cast<Eigen::Index>(std::llround(spec.margin_seconds * fs));
  const int n_trials = spec.n_trials_negative + spec.n_trials_positive;

  // Trial order: a seeded shuffle of the class labels.
  std::vector<int> order;
  order.insert(order.end(), static_cast<std::size_t>(spec.n_trials_negative), 0);
  order.insert(order.end(), static_cast<std::size_t>(spec.n_trials_positive), 1);
  Rng order_rng(derive_seed(spec.seed, {kOrderSeed}));
  order_rng.shuffle(order);

  SynthOutput out;
  out.class_names = spec.class_names;
  for (int t = 0; t < n_trials; ++t) {
    out.events.events.push_back(Event{margin + t * (win + gap), order[static_cast<std::size_t>(t)]});
  }
  Eigen::Index n_samples = 2 * margin + n_trials * (win + gap);
  n_samples = next_smooth_length(n_samples);

  Recording& rec = out.recording;
  rec.participant_id = spec.participant_id;
  rec.fs = fs;
  rec.data.resize(spec.n_channels, n_samples);
  const std::vector<std::string> regions = spec.regions.empty() ? default_regions(spec) : spec.regions;
  const std::set<int> informative(spec.informative_channels.begin(), spec.informative_channels.end());

  // Tukey taper (10 % cosine ramps) spanning one trial window.
  Eigen::VectorXd taper = Eigen::VectorXd::Ones(win);
  const Eigen::Index ramp = std::max<Eigen::Index>(1, win / 10);
  for (Eigen::Index i = 0; i < ramp && i < win; ++i) {
    const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(ramp)));
    taper[i] = w;
    taper[win - 1 - i] = w;
  }

  for (int ch = 0; ch < spec.n_channels; ++ch) {
    const auto uch = static_cast<std::uint64_t>(ch);
    Rng noise_rng(derive_seed(spec.seed, {kNoiseSeed, uch}));
    Eigen::VectorXd background = spec.pink_weight * pink_noise(n_samples, noise_rng);
    for (Eigen::Index i = 0; i < n_samples; ++i) background[i] += spec.white_weight * noise_rng.normal();

    const Eigen::VectorXd gamma = bandpass_gamma(background, fs);
    const double sigma_gamma = std::sqrt(gamma.squaredNorm() / static_cast<double>(n_samples));

    if (spec.gain_variability > 0.0) {
      Rng gain_rng(derive_seed(spec.seed, {kGainSeed, uch}));
      const Eigen::VectorXd log_gain = slow_log_gain(n_samples, fs, gain_rng);
      background.array() *= (spec.gain_variability * log_gain.array()).exp();
    }

    if (informative.count(ch) && spec.effect_size > 0.0) {
      Rng burst_rng(derive_seed(spec.seed, {kBurstSeed, uch}));
      for (const Event& ev : out.events.events) {
        if (ev.label != 1) continue;
        const double freq = burst_rng.uniform(kCarrierLowHz, kCarrierHighHz);
        const double phase = burst_rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double z = burst_rng.normal();
        const double u = std::exp(spec.burst_jitter * z - 0.5 * spec.burst_jitter * spec.burst_jitter);
        const double amplitude = spec.effect_size * kBurstScale * sigma_gamma * u * std::sqrt(2.0);
        for (Eigen::Index i = 0; i < win; ++i) {
          const double t = static_cast<double>(i) / fs;
          background[ev.onset_sample + i] +=
              amplitude * taper[i] * std::sin(2.0 * std::numbers::pi * freq * t + phase);
        }
      }
    }
    rec.data.row(ch) = kMicrovoltScale * background.transpose();

    ChannelMeta meta;
    meta.name = "ch" + std::to_string(ch);
    if (!regions[static_cast<std::size_t>(ch)].empty()) meta.region = regions[static_cast<std::size_t>(ch)];
    rec.channels.push_back(std::move(meta));
  }
  return out;
}

SynthSpec synth_spec_from_json(std::string_view text) {
  nlohmann::json v;
  try {
    v = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("synth spec is not valid JSON: ") + e.what());
  }
  codec::require_known_keys(
      v,
      {"participant_id", "n_channels", "informative_channels", "n_trials_negative",
       "n_trials_positive", "fs", "window_seconds", "effect_size", "pink_weight", "white_weight",
       "gain_variability", "burst_jitter", "gap_seconds", "margin_seconds", "regions", "class_names", "seed"},
      "synth spec", ErrorCode::kSpecInvalid);
  SynthSpec s;
  try {
    auto get = [&](const char* key, auto& target) {
      if (v.contains(key)) target = v.at(key).get<std::decay_t<decltype(target)>>();
    };
    get("participant_id", s.participant_id);
    get("n_channels", s.n_channels);
    get("informative_channels", s.informative_channels);
    get("n_trials_negative", s.n_trials_negative);
    get("n_trials_positive", s.n_trials_positive);
    get("fs", s.fs);
    get("window_seconds", s.window_seconds);
    get("effect_size", s.effect_size);
    get("pink_weight", s.pink_weight);
    get("white_weight", s.white_weight);
    get("gain_variability", s.gain_variability);
    get("burst_jitter", s.burst_jitter);
    get("gap_seconds", s.gap_seconds);
    get("margin_seconds", s.margin_seconds);
    get("regions", s.regions);
    get("class_names", s.class_names);
    get("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("synth spec field has the wrong type: ") + e.what());
  }
  s.validate();
  return s;
}

std::string synth_spec_to_json(const SynthSpec& s) {
  const nlohmann::json v{{"participant_id", s.participant_id},
                         {"n_channels", s.n_channels},
                         {"informative_channels", s.informative_channels},
                         {"n_trials_negative", s.n_trials_negative},
                         {"n_trials_positive", s.n_trials_positive},
                         {"fs", s.fs},
                         {"window_seconds", s.window_seconds},
                         {"effect_size", s.effect_size},
                         {"pink_weight", s.pink_weight},
                         {"white_weight", s.white_weight},
                         {"gain_variability", s.gain_variability},
                         {"burst_jitter", s.burst_jitter},
                         {"gap_seconds", s.gap_seconds},
                         {"margin_seconds", s.margin_seconds},
                         {"regions", s.regions},
                         {"class_names", s.class_names},
                         {"seed", s.seed}};
  return codec::dump_fixed_precision(v);
}

}  // namespace ieegdec
