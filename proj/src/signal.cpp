#include "ieegdec/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <sstream>

#include "ieegdec/error.hpp"
#include "ieegdec/fft.hpp"

namespace ieegdec {
namespace {

constexpr const char* kModule = "signal";

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
  throw Error(code, kModule, message);
}

// Direct form II transposed state for one section.
struct SectionState {
  double z1 = 0.0;
  double z2 = 0.0;
};

// Steady-state section states for a unit step at the cascade input.
std::vector<SectionState> step_initial_conditions(const std::vector<SecondOrderSection>& sections) {
  std::vector<SectionState> zi(sections.size());
  double scale = 1.0;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const auto& b = sections[s].b;
    const auto& a = sections[s].a;
    const double dc = (b[0] + b[1] + b[2]) / (a[0] + a[1] + a[2]);
    const double y = dc * scale;
    zi[s].z2 = b[2] * scale - a[2] * y;
    zi[s].z1 = y - b[0] * scale;
    scale = y;
  }
  return zi;
}

void run_cascade(const std::vector<SecondOrderSection>& sections,
                 std::vector<SectionState> state, Eigen::VectorXd& x) {
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const auto& b = sections[s].b;
    const auto& a = sections[s].a;
    double z1 = state[s].z1;
    double z2 = state[s].z2;
    for (Eigen::Index t = 0; t < x.size(); ++t) {
      const double in = x[t];
      const double out = b[0] * in + z1;
      z1 = b[1] * in - a[1] * out + z2;
      z2 = b[2] * in - a[2] * out;
      x[t] = out;
    }
  }
}

}  // namespace

void Recording::validate() const {
  if (!(fs > 2.0 * kGammaHighHz) || !std::isfinite(fs)) {
    fail(ErrorCode::kNyquistViolation,
         "sampling rate " + std::to_string(fs) + " Hz must exceed 240 Hz");
  }
  if (n_channels() < 1) fail(ErrorCode::kInvalidArgument, "recording has no channels");
  if (static_cast<Eigen::Index>(channels.size()) != n_channels()) {
    fail(ErrorCode::kShapeMismatch, "channel metadata count does not match data rows");
  }
  std::set<std::string> names;
  for (const auto& ch : channels) {
    if (ch.name.empty()) fail(ErrorCode::kInvalidArgument, "channel name is empty");
    if (!names.insert(ch.name).second) {
      fail(ErrorCode::kInvalidArgument, "duplicate channel name '" + ch.name + "'");
    }
  }
  if (!data.allFinite()) fail(ErrorCode::kNonFinite, "recording contains non-finite samples");
}

void EventList::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].onset_sample < 0) {
      fail(ErrorCode::kInvalidArgument, "event " + std::to_string(i) + " has a negative onset");
    }
    if (events[i].label < 0) {
      fail(ErrorCode::kInvalidArgument, "event " + std::to_string(i) + " has a negative label");
    }
    if (i > 0 && events[i].onset_sample <= events[i - 1].onset_sample) {
      fail(ErrorCode::kInvalidArgument, "event onsets are not strictly increasing at index " +
                                            std::to_string(i));
    }
  }
}

std::vector<SecondOrderSection> design_butterworth_bandpass(int order, double low, double high,
                                                            double fs) {
  using cplx = std::complex<double>;
  if (order < 1) fail(ErrorCode::kInvalidArgument, "filter order must be positive");
  if (!(fs > 0.0)) fail(ErrorCode::kInvalidArgument, "sampling rate must be positive");
  if (!(high < fs / 2.0)) {
    fail(ErrorCode::kNyquistViolation, "upper band edge " + std::to_string(high) +
                                           " Hz is not below Nyquist (" + std::to_string(fs / 2) +
                                           " Hz)");
  }
  if (!(low > 0.0 && low < high)) {
    fail(ErrorCode::kInvalidArgument, "band edges must satisfy 0 < low < high");
  }

  const double fs2 = 2.0 * fs;
  const double w1 = fs2 * std::tan(std::numbers::pi * low / fs);
  const double w2 = fs2 * std::tan(std::numbers::pi * high / fs);
  const double bw = w2 - w1;
  const double w0sq = w1 * w2;

  // Analog band-pass poles from the unit-circle low-pass prototype.
  std::vector<cplx> analog_poles;
  for (int k = 0; k < order; ++k) {
    const cplx p = std::polar(1.0, std::numbers::pi * (2.0 * k + 1.0 + order) / (2.0 * order));
    const cplx half = p * bw / 2.0;
    const cplx disc = std::sqrt(half * half - w0sq);
    analog_poles.push_back(half + disc);
    analog_poles.push_back(half - disc);
  }

  // Bilinear map. The `order` zeros at s = 0 land on z = 1; the remaining
  // `order` zeros at infinity land on z = -1.
  cplx gain = std::pow(bw, order) * std::pow(fs2, order);
  std::vector<cplx> digital_poles;
  for (const cplx& p : analog_poles) {
    gain /= (fs2 - p);
    digital_poles.push_back((fs2 + p) / (fs2 - p));
  }

  std::vector<cplx> upper;
  for (const cplx& z : digital_poles) {
    if (z.imag() > 0.0) upper.push_back(z);
  }
  if (static_cast<int>(upper.size()) != order) {
    fail(ErrorCode::kInvalidArgument, "band-pass design produced real poles; band too wide");
  }
  std::sort(upper.begin(), upper.end(),
            [](const cplx& l, const cplx& r) { return std::abs(l) < std::abs(r); });

  std::vector<SecondOrderSection> sections;
  for (const cplx& z : upper) {
    SecondOrderSection s{{1.0, 0.0, -1.0}, {1.0, -2.0 * z.real(), std::norm(z)}};
    sections.push_back(s);
  }
  const double k = gain.real();
  for (double& coeff : sections.front().b) coeff *= k;
  return sections;
}

Eigen::Index filtfilt_pad_length(int order) { return 3 * (2 * order); }

Eigen::VectorXd sos_filtfilt(const std::vector<SecondOrderSection>& sections,
                             const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index pad) {
  const Eigen::Index n = x.size();
  if (n <= pad) {
    fail(ErrorCode::kTooShort, "signal of length " + std::to_string(n) +
                                   " is shorter than the filter warm-up length " +
                                   std::to_string(pad + 1));
  }
  Eigen::VectorXd ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i) {
    ext[i] = 2.0 * x[0] - x[pad - i];
    ext[n + pad + i] = 2.0 * x[n - 1] - x[n - 2 - i];
  }
  ext.segment(pad, n) = x;

  const std::vector<SectionState> zi = step_initial_conditions(sections);
  auto scaled = [&](double v) {
    std::vector<SectionState> s = zi;
    for (auto& st : s) {
      st.z1 *= v;
      st.z2 *= v;
    }
    return s;
  };

  run_cascade(sections, scaled(ext[0]), ext);
  ext.reverseInPlace();
  run_cascade(sections, scaled(ext[0]), ext);
  ext.reverseInPlace();
  return ext.segment(pad, n);
}

Eigen::VectorXd bandpass_gamma_impl(const Eigen::Ref<const Eigen::VectorXd>& signal, double fs,
                                    double low, double high) {
  const auto sections = design_butterworth_bandpass(kButterworthOrder, low, high, fs);
  return sos_filtfilt(sections, signal, filtfilt_pad_length(kButterworthOrder));
}

Eigen::VectorXd hilbert_envelope_impl(const Eigen::Ref<const Eigen::VectorXd>& signal) {
  const Eigen::Index n = signal.size();
  if (n == 0) fail(ErrorCode::kEmpty, "hilbert_envelope of an empty signal");
  if (n < 2) fail(ErrorCode::kTooShort, "hilbert_envelope needs at least 2 samples");
  if (!signal.allFinite()) fail(ErrorCode::kNonFinite, "hilbert_envelope input is not finite");

  Eigen::VectorXcd spectrum = dft_real(signal);
  const Eigen::Index half = n / 2;
  const Eigen::Index last_doubled = (n % 2 == 0) ? half - 1 : half;
  for (Eigen::Index k = 1; k <= last_doubled; ++k) spectrum[k] *= 2.0;
  for (Eigen::Index k = last_doubled + 1; k < n; ++k) {
    if (n % 2 == 0 && k == half) continue;
    spectrum[k] = 0.0;
  }
  return idft(spectrum).cwiseAbs();
}

Eigen::Index window_length(double window_seconds, double fs) {
  if (!(window_seconds > 0.0) || !(fs > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "window length and sampling rate must be positive");
  }
  const auto len = static_cast<Eigen::Index>(std::llround(window_seconds * fs));
  if (len < 1) fail(ErrorCode::kInvalidArgument, "window shorter than one sample");
  return len;
}

Eigen::Index window_start(Eigen::Index onset, Eigen::Index length, Alignment alignment) {
  return alignment == Alignment::kOnset ? onset : onset - length / 2;
}

std::vector<std::vector<EnvelopeWindow>> segment(const Recording& recording,
                                                 const EventList& events, double window_seconds,
                                                 Alignment alignment, FeatureInput input) {
  recording.validate();
  events.validate();
  const Eigen::Index len = window_length(window_seconds, recording.fs);

  std::vector<std::size_t> offending;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Eigen::Index start = window_start(events.events[i].onset_sample, len, alignment);
    if (start < 0 || start + len > recording.n_samples()) offending.push_back(i);
  }
  if (!offending.empty()) {
    std::ostringstream msg;
    msg << "windows out of bounds for event indices [";
    for (std::size_t i = 0; i < offending.size(); ++i) msg << (i ? "," : "") << offending[i];
    msg << "]";
    fail(ErrorCode::kOutOfBounds, msg.str());
  }

  std::vector<std::vector<EnvelopeWindow>> out(static_cast<std::size_t>(recording.n_channels()));
  for (Eigen::Index ch = 0; ch < recording.n_channels(); ++ch) {
    const Eigen::VectorXd raw = recording.data.row(ch).transpose();
    Eigen::VectorXd processed = bandpass_gamma(raw, recording.fs);
    if (input == FeatureInput::kEnvelope) processed = hilbert_envelope(processed);

    auto& windows = out[static_cast<std::size_t>(ch)];
    windows.reserve(events.size());
    for (const Event& ev : events.events) {
      const Eigen::Index start = window_start(ev.onset_sample, len, alignment);
      windows.push_back(EnvelopeWindow{ch, processed.segment(start, len), ev.label});
    }
  }
  return out;
}

}  // namespace ieegdec
