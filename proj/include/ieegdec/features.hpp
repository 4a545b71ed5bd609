#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ieegdec/error.hpp"
#include "ieegdec/fft.hpp"
#include "ieegdec/signal.hpp"

namespace ieegdec {

inline constexpr int kNumFeatures = 18;
inline constexpr int kNumTimeFeatures = 12;

// Variance/power below this is treated as a constant window.
inline constexpr double kDegenerateEps = 1e-12;

// Canonical column order: twelve time-domain features, then six
// frequency-domain features.
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "average",      "rms",           "max_peak",        "variance",
    "skewness",     "kurtosis",      "autocorrelation", "nonlinear_energy",
    "spikes",       "hfd",           "shannon_entropy", "renyi_entropy",
    "coastline",    "band_power",    "sef90",           "hjorth_mobility",
    "hjorth_complexity", "spectral_entropy"};

template <typename Scalar>
using FeatureVectorT = Eigen::Matrix<Scalar, kNumFeatures, 1>;
using FeatureVector = FeatureVectorT<double>;

// One row per window for a single channel.
struct FeatureMatrix {
  Eigen::Index channel_index = 0;
  Eigen::MatrixXd rows;  // [n_windows x 18]
  std::vector<int> labels;
};

namespace detail {

[[noreturn]] inline void feature_error(ErrorCode code, const std::string& message) {
  throw Error(code, "features", message);
}

template <typename Derived>
void require_length(const Eigen::MatrixBase<Derived>& x, Eigen::Index min_len, const char* what) {
  if (x.size() == 0) feature_error(ErrorCode::kEmpty, std::string(what) + " of an empty window");
  if (x.size() < min_len) {
    feature_error(ErrorCode::kTooShort, std::string(what) + " needs at least " +
                                            std::to_string(min_len) + " samples");
  }
}

template <typename Derived>
typename Derived::Scalar central_moment(const Eigen::MatrixBase<Derived>& x, int order) {
  using Scalar = typename Derived::Scalar;
  const auto d = (x.array() - x.mean()).eval();
  switch (order) {
    case 2: return d.square().mean();
    case 3: return d.cube().mean();
    case 4: return d.square().square().mean();
    default: return d.pow(static_cast<Scalar>(order)).mean();
  }
}

template <typename Derived>
typename Derived::Scalar population_variance(const Eigen::MatrixBase<Derived>& x) {
  const auto mu = x.mean();
  return (x.array() - mu).square().mean();
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> first_difference(
    const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index n = x.size();
  return x.tail(n - 1) - x.head(n - 1);
}

// Probability mass of an equal-width histogram spanning [min, max].
// Empty when the window is single-valued.
template <typename Derived>
std::vector<double> amplitude_histogram(const Eigen::MatrixBase<Derived>& x, int n_bins) {
  if (n_bins < 1) feature_error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  const double lo = static_cast<double>(x.minCoeff());
  const double hi = static_cast<double>(x.maxCoeff());
  const double range = hi - lo;
  if (!(range > kDegenerateEps)) return {};
  std::vector<double> counts(static_cast<std::size_t>(n_bins), 0.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    auto bin = static_cast<int>(std::floor((static_cast<double>(x[i]) - lo) / range * n_bins));
    bin = std::clamp(bin, 0, n_bins - 1);
    counts[static_cast<std::size_t>(bin)] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(x.size());
  return counts;
}

// Periodogram |DFT(x - mean)|^2 / N at bins k = 1 .. floor(N/2).
template <typename Derived>
Eigen::VectorXd positive_periodogram(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index n = x.size();
  const Eigen::VectorXd centered =
      (x.template cast<double>().array() - static_cast<double>(x.mean())).matrix();
  const Eigen::VectorXcd spectrum = dft_real(centered);
  return spectrum.segment(1, n / 2).cwiseAbs2() / static_cast<double>(n);
}

}  // namespace detail

// Mean of the centred moving-average smoothed window (L = max(1, round(0.05 N)),
// averaging only over samples inside the window at the edges).
template <typename Derived>
typename Derived::Scalar f_average(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 1, "average");
  const Eigen::Index n = x.size();
  const Eigen::Index len = std::max<Eigen::Index>(1, std::llround(0.05 * static_cast<double>(n)));
  const Eigen::Index left = (len - 1) / 2;
  const Eigen::Index right = len - 1 - left;

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> prefix(n + 1);
  prefix[0] = Scalar(0);
  for (Eigen::Index i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];

  Scalar total(0);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, t - left);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, t + right);
    total += (prefix[hi + 1] - prefix[lo]) / static_cast<Scalar>(hi - lo + 1);
  }
  return total / static_cast<Scalar>(n);
}

template <typename Derived>
typename Derived::Scalar f_rms(const Eigen::MatrixBase<Derived>& x) {
  detail::require_length(x, 1, "rms");
  return std::sqrt(x.squaredNorm() / static_cast<typename Derived::Scalar>(x.size()));
}

template <typename Derived>
typename Derived::Scalar f_max_peak(const Eigen::MatrixBase<Derived>& x) {
  detail::require_length(x, 1, "max_peak");
  return x.maxCoeff();
}

template <typename Derived>
typename Derived::Scalar f_variance(const Eigen::MatrixBase<Derived>& x) {
  detail::require_length(x, 2, "variance");
  return detail::population_variance(x);
}

template <typename Derived>
typename Derived::Scalar f_skewness(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 3, "skewness");
  const Scalar m2 = detail::central_moment(x, 2);
  if (m2 < kDegenerateEps) return Scalar(0);
  return detail::central_moment(x, 3) / std::pow(m2, Scalar(1.5));
}

// Excess kurtosis.
template <typename Derived>
typename Derived::Scalar f_kurtosis(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 4, "kurtosis");
  const Scalar m2 = detail::central_moment(x, 2);
  if (m2 < kDegenerateEps) return Scalar(0);
  return detail::central_moment(x, 4) / (m2 * m2) - Scalar(3);
}

// Lag-1 autocorrelation with population normalisation.
template <typename Derived>
typename Derived::Scalar f_autocorr(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 2, "autocorrelation");
  const Eigen::Index n = x.size();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c = x.array() - x.mean();
  const Scalar denom = c.squaredNorm();
  if (denom / static_cast<Scalar>(n) < kDegenerateEps) return Scalar(0);
  return c.head(n - 1).dot(c.tail(n - 1)) / denom;
}

// Mean Teager-Kaiser energy x[t]^2 - x[t-1] x[t+1].
template <typename Derived>
typename Derived::Scalar f_nonlinear_energy(const Eigen::MatrixBase<Derived>& x) {
  detail::require_length(x, 3, "nonlinear_energy");
  const Eigen::Index n = x.size();
  const auto mid = x.segment(1, n - 2).array();
  return (mid.square() - x.head(n - 2).array() * x.tail(n - 2).array()).mean();
}

// Strict local maxima above mean + 2 std.
template <typename Derived>
typename Derived::Scalar f_spikes(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 3, "spikes");
  const Scalar sd = std::sqrt(detail::population_variance(x));
  if (sd < kDegenerateEps) return Scalar(0);
  const Scalar threshold = x.mean() + Scalar(2) * sd;
  int count = 0;
  for (Eigen::Index t = 1; t + 1 < x.size(); ++t) {
    if (x[t] > x[t - 1] && x[t] > x[t + 1] && x[t] > threshold) ++count;
  }
  return static_cast<Scalar>(count);
}

// Higuchi fractal dimension over scales k = 1..k_max. A window with no
// variation is a flat line and reports dimension 1.
template <typename Derived>
typename Derived::Scalar f_hfd(const Eigen::MatrixBase<Derived>& x, int k_max = 10) {
  using Scalar = typename Derived::Scalar;
  if (k_max < 2) detail::feature_error(ErrorCode::kInvalidArgument, "hfd needs k_max >= 2");
  detail::require_length(x, 2 * static_cast<Eigen::Index>(k_max), "hfd");
  const Eigen::Index n = x.size();
  if (detail::first_difference(x).cwiseAbs().sum() < kDegenerateEps) return Scalar(1);

  Eigen::VectorXd log_inv_k(k_max);
  Eigen::VectorXd log_len(k_max);
  for (int k = 1; k <= k_max; ++k) {
    double sum_over_m = 0.0;
    for (int m = 0; m < k; ++m) {
      const Eigen::Index steps = (n - 1 - m) / k;
      double path = 0.0;
      for (Eigen::Index i = 1; i <= steps; ++i) {
        path += std::abs(static_cast<double>(x[m + i * k] - x[m + (i - 1) * k]));
      }
      sum_over_m += path * static_cast<double>(n - 1) / (static_cast<double>(steps) * k) / k;
    }
    const double curve = std::max(sum_over_m / k, kDegenerateEps);
    log_inv_k[k - 1] = std::log(1.0 / k);
    log_len[k - 1] = std::log(curve);
  }
  const double mx = log_inv_k.mean();
  const double my = log_len.mean();
  const double sxy = ((log_inv_k.array() - mx) * (log_len.array() - my)).sum();
  const double sxx = (log_inv_k.array() - mx).square().sum();
  return static_cast<Scalar>(sxy / sxx);
}

template <typename Derived>
typename Derived::Scalar f_shannon_entropy(const Eigen::MatrixBase<Derived>& x, int n_bins = 10) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 1, "shannon_entropy");
  double h = 0.0;
  for (double p : detail::amplitude_histogram(x, n_bins)) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return static_cast<Scalar>(h);
}

template <typename Derived>
typename Derived::Scalar f_renyi_entropy(const Eigen::MatrixBase<Derived>& x, double alpha = 2.0,
                                         int n_bins = 10) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 1, "renyi_entropy");
  if (!(alpha > 0.0) || alpha == 1.0) {
    detail::feature_error(ErrorCode::kInvalidArgument, "renyi_entropy needs alpha > 0, alpha != 1");
  }
  const auto probs = detail::amplitude_histogram(x, n_bins);
  if (probs.empty()) return Scalar(0);
  double s = 0.0;
  for (double p : probs) {
    if (p > 0.0) s += std::pow(p, alpha);
  }
  return static_cast<Scalar>(std::log2(s) / (1.0 - alpha));
}

template <typename Derived>
typename Derived::Scalar f_coastline(const Eigen::MatrixBase<Derived>& x) {
  detail::require_length(x, 2, "coastline");
  return detail::first_difference(x).cwiseAbs().sum();
}

// Mean periodogram value over the positive-frequency bins.
template <typename Derived>
typename Derived::Scalar f_band_power(const Eigen::MatrixBase<Derived>& x, double /*fs*/) {
  detail::require_length(x, 8, "band_power");
  return static_cast<typename Derived::Scalar>(detail::positive_periodogram(x).mean());
}

// Lowest bin frequency (Hz) at which cumulative power reaches 90 % of total.
template <typename Derived>
typename Derived::Scalar f_sef90(const Eigen::MatrixBase<Derived>& x, double fs) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 8, "sef90");
  const Eigen::VectorXd p = detail::positive_periodogram(x);
  const double total = p.sum();
  if (total < kDegenerateEps) return Scalar(0);
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    cumulative += p[i];
    if (cumulative >= 0.9 * total) {
      return static_cast<Scalar>(static_cast<double>(i + 1) * fs / static_cast<double>(x.size()));
    }
  }
  return static_cast<Scalar>(static_cast<double>(p.size()) * fs / static_cast<double>(x.size()));
}

template <typename Derived>
typename Derived::Scalar f_hjorth_mobility(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 3, "hjorth_mobility");
  const Scalar var_x = detail::population_variance(x);
  if (var_x < kDegenerateEps) return Scalar(0);
  return std::sqrt(detail::population_variance(detail::first_difference(x)) / var_x);
}

template <typename Derived>
typename Derived::Scalar f_hjorth_complexity(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 4, "hjorth_complexity");
  const Scalar mobility = f_hjorth_mobility(x);
  if (mobility < kDegenerateEps) return Scalar(0);
  return f_hjorth_mobility(detail::first_difference(x)) / mobility;
}

// Normalised Shannon entropy of the periodogram, in [0, 1].
template <typename Derived>
typename Derived::Scalar f_spectral_entropy(const Eigen::MatrixBase<Derived>& x, double /*fs*/) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(x, 8, "spectral_entropy");
  const Eigen::VectorXd p = detail::positive_periodogram(x);
  const double total = p.sum();
  if (total < kDegenerateEps) return Scalar(0);
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double q = p[i] / total;
    if (q > 0.0) h -= q * std::log2(q);
  }
  return static_cast<Scalar>(h / std::log2(static_cast<double>(p.size())));
}

// All 18 features in canonical order. Errors carry the failing feature's name.
FeatureVector extract_features(const Eigen::Ref<const Eigen::VectorXd>& window, double fs);
FeatureVector extract_features(const EnvelopeWindow& window, double fs);

FeatureMatrix extract_feature_matrix(const std::vector<EnvelopeWindow>& windows, double fs);

// CSV with header `channel,window,label,<18 names>` and 17 significant digits.
// Labels are written as names when `label_names` covers the code, else as codes.
void write_feature_csv(std::ostream& out, const std::vector<FeatureMatrix>& matrices,
                       const std::vector<std::string>& label_names = {});

}  // namespace ieegdec
