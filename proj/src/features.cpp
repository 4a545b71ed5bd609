#include "ieegdec/features.hpp"

#include <cstdio>
#include <ostream>

namespace ieegdec {

FeatureVector extract_features(const Eigen::Ref<const Eigen::VectorXd>& x, double fs) {
  FeatureVector v;
  int index = 0;
  auto put = [&](auto&& compute) {
    try {
      v[index] = compute();
    } catch (const Error& e) {
      throw Error(e.code(), "features",
                  "feature '" + std::string(kFeatureNames[static_cast<std::size_t>(index)]) +
                      "': " + e.what());
    }
    ++index;
  };
  put([&] { return f_average(x); });
  put([&] { return f_rms(x); });
  put([&] { return f_max_peak(x); });
  put([&] { return f_variance(x); });
  put([&] { return f_skewness(x); });
  put([&] { return f_kurtosis(x); });
  put([&] { return f_autocorr(x); });
  put([&] { return f_nonlinear_energy(x); });
  put([&] { return f_spikes(x); });
  put([&] { return f_hfd(x); });
  put([&] { return f_shannon_entropy(x); });
  put([&] { return f_renyi_entropy(x); });
  put([&] { return f_coastline(x); });
  put([&] { return f_band_power(x, fs); });
  put([&] { return f_sef90(x, fs); });
  put([&] { return f_hjorth_mobility(x); });
  put([&] { return f_hjorth_complexity(x); });
  put([&] { return f_spectral_entropy(x, fs); });
  return v;
}

FeatureVector extract_features(const EnvelopeWindow& window, double fs) {
  return extract_features(window.samples, fs);
}

FeatureMatrix extract_feature_matrix(const std::vector<EnvelopeWindow>& windows, double fs) {
  FeatureMatrix m;
  m.channel_index = windows.empty() ? 0 : windows.front().channel_index;
  m.rows.resize(static_cast<Eigen::Index>(windows.size()), kNumFeatures);
  m.labels.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].channel_index != m.channel_index) {
      throw Error(ErrorCode::kShapeMismatch, "features", "windows from different channels");
    }
    m.rows.row(static_cast<Eigen::Index>(i)) = extract_features(windows[i], fs).transpose();
    m.labels.push_back(windows[i].label);
  }
  return m;
}

void write_feature_csv(std::ostream& out, const std::vector<FeatureMatrix>& matrices,
                       const std::vector<std::string>& label_names) {
  out << "channel,window,label";
  for (auto name : kFeatureNames) out << ',' << name;
  out << '\n';
  char buf[40];
  for (const auto& m : matrices) {
    for (Eigen::Index r = 0; r < m.rows.rows(); ++r) {
      const int label = m.labels[static_cast<std::size_t>(r)];
      out << m.channel_index << ',' << r << ',';
      if (label >= 0 && static_cast<std::size_t>(label) < label_names.size()) {
        out << label_names[static_cast<std::size_t>(label)];
      } else {
        out << label;
      }
      for (Eigen::Index c = 0; c < m.rows.cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", m.rows(r, c));
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

}  // namespace ieegdec
