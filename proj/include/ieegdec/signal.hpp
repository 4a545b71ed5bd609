#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ieegdec {

enum class Hemisphere { kLeft, kRight };

struct ChannelMeta {
  std::string name;
  std::optional<std::string> region;
  std::optional<Hemisphere> hemisphere;
};

// Continuous multichannel recording; data is [n_channels x n_samples] in microvolts.
struct Recording {
  std::string participant_id;
  double fs = 0.0;
  std::vector<ChannelMeta> channels;
  Eigen::MatrixXd data;

  Eigen::Index n_channels() const { return data.rows(); }
  Eigen::Index n_samples() const { return data.cols(); }

  // Throws Error(kInvalidArgument / kNyquistViolation / kNonFinite) on the
  // first broken invariant.
  void validate() const;
};

// Labels are non-negative class codes; the container layer maps codes to names.
struct Event {
  Eigen::Index onset_sample = 0;
  int label = 0;
};

struct EventList {
  std::vector<Event> events;

  std::size_t size() const { return events.size(); }
  void validate() const;
};

struct EnvelopeWindow {
  Eigen::Index channel_index = 0;
  Eigen::VectorXd samples;
  int label = 0;
};

enum class Alignment { kOnset, kCentered };

// Which signal the windows are cut from before feature extraction.
enum class FeatureInput { kEnvelope, kGammaBand };

inline constexpr double kGammaLowHz = 65.0;
inline constexpr double kGammaHighHz = 120.0;
inline constexpr int kButterworthOrder = 4;

struct SecondOrderSection {
  std::array<double, 3> b;
  std::array<double, 3> a;  // a[0] == 1
};

// Digital Butterworth band-pass of prototype order `order` (band-pass order
// 2*order) designed by the bilinear transform with pre-warped edges.
std::vector<SecondOrderSection> design_butterworth_bandpass(int order, double low, double high,
                                                            double fs);

// Number of reflected samples added on each side before forward-backward filtering.
Eigen::Index filtfilt_pad_length(int order);

// Zero-phase forward-backward cascade with odd reflection padding and
// steady-state initial conditions.
Eigen::VectorXd sos_filtfilt(const std::vector<SecondOrderSection>& sections,
                             const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index pad);

Eigen::VectorXd bandpass_gamma_impl(const Eigen::Ref<const Eigen::VectorXd>& signal, double fs,
                                    double low, double high);

Eigen::VectorXd hilbert_envelope_impl(const Eigen::Ref<const Eigen::VectorXd>& signal);

// Gamma band-pass (4th-order Butterworth prototype, zero phase).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> bandpass_gamma(
    const Eigen::MatrixBase<Derived>& signal, double fs, double low = kGammaLowHz,
    double high = kGammaHighHz) {
  using Scalar = typename Derived::Scalar;
  const Eigen::VectorXd x = signal.template cast<double>();
  return bandpass_gamma_impl(x, fs, low, high).template cast<Scalar>();
}

// Magnitude of the analytic signal, computed with an exact-length DFT.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> hilbert_envelope(
    const Eigen::MatrixBase<Derived>& signal) {
  using Scalar = typename Derived::Scalar;
  const Eigen::VectorXd x = signal.template cast<double>();
  return hilbert_envelope_impl(x).template cast<Scalar>();
}

Eigen::Index window_length(double window_seconds, double fs);

// Start sample of the window for an event under the given alignment (may be
// negative for centered windows near the start of the recording).
Eigen::Index window_start(Eigen::Index onset, Eigen::Index length, Alignment alignment);

// Band-pass, envelope and cut every channel. Result is indexed
// [channel][event]. Throws kOutOfBounds naming every offending event.
std::vector<std::vector<EnvelopeWindow>> segment(const Recording& recording,
                                                 const EventList& events,
                                                 double window_seconds = 2.0,
                                                 Alignment alignment = Alignment::kOnset,
                                                 FeatureInput input = FeatureInput::kEnvelope);

}  // namespace ieegdec
